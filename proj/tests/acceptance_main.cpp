// Acceptance suite: one pass/fail line per criterion, nonzero exit code if
// any criterion fails. Criteria cover the contour/spectral agreement, the
// integral-transform identity, closed-form square functions, the dyadic
// decomposition bands, imaginary-power norm growth, the weighted-shift
// threshold dichotomy, the operator-tuple constant identity, the
// gamma-estimator anchors, and bit-level determinism.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "sectorlab/experiments.hpp"
#include "sectorlab/function_norms.hpp"
#include "sectorlab/gaussian.hpp"

using namespace sectorlab;

namespace {

int failures = 0;

void report(const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] %s - %s\n", pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// 1. contour calculus against the spectral oracle
void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (std::size_t m : {8u, 16u, 32u}) {
    ModelSpec spec;
    spec.kind = ModelSpec::Kind::laplacian1d;
    spec.m = m;
    const Model model = build_model(spec);
    const auto presets = sector_function_presets();
    const auto results = contour_calculus_batch(model.op, presets);
    for (std::size_t i = 0; i < presets.size(); ++i) {
      const ComplexMatrix oracle = spectral_calculus(
          model.op, [&](double lam) { return presets[i].eval(cplx(lam)); });
      worst = std::max(worst, (results[i] - oracle).frobenius_norm() /
                                  oracle.frobenius_norm());
    }
  }
  const double dt = seconds_since(t0);
  report("criterion 1: contour vs spectral oracle", worst <= 1e-8 && dt < 10.0,
         "max rel err " + fmt(worst) + " over 10 functions x m in {8,16,32}, " +
             fmt(dt) + " s");
}

// 2. integral-transform identity for imaginary powers
void criterion_2() {
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentReport rep = run_experiment("mellin", nullptr, 42);
  const double dt = seconds_since(t0);
  const bool pass = rep.all_passed() && rep.scalar("max_rel_error") <= 1e-6 &&
                    std::abs(rep.scalar("anchor_lhs") - M_PI) < 1e-12 &&
                    rep.scalar("anchor_rel_error") <= 1e-6 && dt < 30.0;
  report("criterion 2: integral-transform identity", pass,
         "max rel err " + fmt(rep.scalar("max_rel_error")) + ", anchor -> pi, " +
             fmt(dt) + " s");
}

// 3. closed-form square functions on the Hilbert model
void criterion_3() {
  const ExperimentReport rep = run_experiment("square_suite", nullptr, 42);
  const double c2_err = std::abs(rep.scalar("c2") - std::sqrt(M_PI));
  const double c5_err = std::abs(rep.scalar("c5_zero") - 1.0 / std::sqrt(2.0));
  const double c3_err = std::abs(rep.scalar("c3_axis") - std::sqrt(M_PI / 2.0));
  const bool pass = c2_err <= 1e-3 && c5_err <= 1e-6 && c3_err <= 1e-4;
  report("criterion 3: closed-form square functions", pass,
         "imaginary-power " + fmt(c2_err) + " (<=1e-3), semigroup " + fmt(c5_err) +
             " (<=1e-6), resolvent " + fmt(c3_err) + " (<=1e-4)");
}

// 4. dyadic decomposition bands
void criterion_4() {
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  std::string detail;
  for (std::size_t m : {8u, 16u, 32u}) {
    const ExperimentReport rep = run_experiment(
        "paley_littlewood",
        {{"model", {{"kind", "laplacian1d"}, {"m", m}, {"p", 2.0}}},
         {"num_vectors", 200}, {"samples", 2000}},
        42);
    const double lo = rep.scalar("min_ratio"), hi = rep.scalar("max_ratio");
    pass = pass && lo >= 0.70 && hi <= 1.01;
    if (m == 32) detail += "p=2 band [" + fmt(lo) + "," + fmt(hi) + "]";
  }
  for (double p : {1.5, 3.0}) {
    double band = 0.0;
    for (std::size_t m : {8u, 16u, 32u}) {
      const ExperimentReport rep = run_experiment(
          "paley_littlewood",
          {{"model", {{"kind", "laplacian1d"}, {"m", m}, {"p", p}}},
           {"num_vectors", 200}, {"samples", 2000}},
          42);
      band = std::max(band, rep.scalar("band"));
      pass = pass && rep.scalar("min_ratio") > 0.0;
    }
    pass = pass && band < 10.0;
    detail += ", p=" + fmt(p) + " band " + fmt(band);
  }
  const double dt = seconds_since(t0);
  pass = pass && dt < 60.0;
  report("criterion 4: dyadic decomposition bands", pass, detail + ", " + fmt(dt) + " s");
}

// 5. imaginary-power norm growth in the localized scale
void criterion_5() {
  const DyadicPartition part = make_partition(6);
  const std::vector<double> s_grid{0.0, 5.0, 10.0, 25.0, 50.0};
  for (double alpha : {1.0, 2.0}) {
    std::vector<double> ratios;
    for (double s : s_grid)
      ratios.push_back(hormander_norm(preset_imag_power(s), alpha, part).value /
                       std::pow(1.0 + s * s, alpha / 2.0));
    const double band = *std::max_element(ratios.begin(), ratios.end()) /
                        *std::min_element(ratios.begin(), ratios.end());
    const double asym = *std::max_element(ratios.begin() + 1, ratios.end()) /
                        *std::min_element(ratios.begin() + 1, ratios.end());
    const bool pass = band <= 4.0;
    std::string detail = "alpha=" + fmt(alpha) + ": band " + fmt(band) + " (<=4)";
    if (!pass)
      detail += "; the s=0 entry is the norm of the constant function, which a "
                "bandwidth/smoothness bound keeps >= ~6x the asymptotic level for "
                "every admissible bump, so a factor-4 band including s=0 is not "
                "attainable; over s in [5,50] the band is " + fmt(asym);
    report("criterion 5: imaginary-power norm growth", pass, detail);
  }
}

// 6. threshold dichotomy on the weighted shift model
void criterion_6() {
  const ExperimentReport rep = run_experiment("matricial_vs_bounded", nullptr, 42);
  bool grows = false, saturates = false;
  for (const auto& [name, verdict] : rep.verdicts) {
    if (name == "small_beta_grows") grows = verdict;
    if (name == "large_beta_saturates") saturates = verdict;
  }
  report("criterion 6: weighted-shift threshold dichotomy", grows && saturates,
         std::string("beta=1.25 grows >10% per valid doubling: ") +
             (grows ? "yes" : "no") + "; beta=2 growth falls below 1% past L/4: " +
             (saturates ? "yes" : "no"));
}

// 7. square-function constant vs column-matrix norm
void criterion_7() {
  double worst = 0.0;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const ExperimentReport rep = run_experiment("thm_main1", nullptr, seed);
    worst = std::max(worst, std::abs(rep.scalar("ratio") - 1.0));
  }
  report("criterion 7: tuple constants coincide on Hilbert space", worst <= 0.01,
         "max |ratio-1| " + fmt(worst) + " over 3 seeded tuples (<=0.01)");
}

// 8. gamma-estimator anchors
void criterion_8() {
  const ModelSpace l2(2.0, 4);
  const ComplexMatrix eye = ComplexMatrix::identity(4);
  const double disc =
      gamma_bound_estimate({eye, eye * cplx(0.5), eye * cplx(0.0, 1.0)}, l2, 24, 42)
          .lower_bound;
  const double doubled =
      gamma_bound_estimate({eye, eye * cplx(2.0)}, l2, 24, 42).lower_bound;

  int mc_failures = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<cvector> family;
    for (std::size_t k = 0; k < 1 + trial % 5; ++k) {
      CounterRng rng(1000 + 10 * trial + k, 3);
      cvector x(6);
      for (auto& z : x) z = rng.next_complex_normal();
      family.push_back(std::move(x));
    }
    const double exact = gauss_norm(family, ModelSpace(2.0, 6), 0, 0).value;
    const GaussNormEstimate mc =
        gauss_norm_mc(family, ModelSpace(2.0, 6), 4096, 777 + trial);
    if (std::abs(mc.value - exact) > 3.0 * mc.std_error) ++mc_failures;
  }
  const bool pass = disc >= 0.99 && disc <= 1.01 && doubled >= 1.98 &&
                    doubled <= 2.0 + 1e-9 && mc_failures == 0;
  report("criterion 8: gamma-estimator anchors", pass,
         "unit-disc family " + fmt(disc) + " in [0.99,1.01], doubled identity " +
             fmt(doubled) + " in [1.98,2.00], Monte Carlo misses " +
             std::to_string(mc_failures) + "/100");
}

// 9. bit-level determinism of experiment scalars
void criterion_9() {
  bool pass = true;
  std::string detail;
  for (const std::string kind :
       {std::string("mellin"), std::string("thm_main1"),
        std::string("matricial_vs_bounded"), std::string("paley_littlewood")}) {
    nlohmann::json cfg;
    if (kind == "mellin") cfg = {{"model", {{"kind", "laplacian1d"}, {"m", 4}}}};
    if (kind == "paley_littlewood")
      cfg = {{"model", {{"kind", "laplacian1d"}, {"m", 8}, {"p", 1.5}}},
             {"num_vectors", 10}, {"samples", 400}};
    const ExperimentReport a = run_experiment(kind, cfg, 42);
    const ExperimentReport b = run_experiment(kind, cfg, 42);
    bool same = a.scalars.size() == b.scalars.size();
    for (std::size_t i = 0; same && i < a.scalars.size(); ++i)
      same = a.scalars[i].first == b.scalars[i].first &&
             std::memcmp(&a.scalars[i].second, &b.scalars[i].second, sizeof(double)) == 0;
    nlohmann::json ja = report_to_json(a), jb = report_to_json(b);
    ja.erase("timestamp");
    jb.erase("timestamp");
    same = same && ja.dump() == jb.dump();
    if (!same) detail += kind + " diverged; ";
    pass = pass && same;
  }
  report("criterion 9: seeded re-runs are bit-identical", pass,
         pass ? "scalars and reports identical across re-runs" : detail);
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  std::printf("acceptance: %d check(s) failed, total %.1f s\n", failures,
              seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
