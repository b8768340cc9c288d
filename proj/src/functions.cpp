#include "sectorlab/functions.hpp"

#include <cmath>
#include <sstream>

#include "sectorlab/jet.hpp"
#include "sectorlab/rng.hpp"

namespace sectorlab {

namespace {

using RJet = Jet<double, kMaxJetOrder>;
using CJet = Jet<cplx, kMaxJetOrder>;

constexpr double kLog2 = 0.69314718055994530941723212145818;

// exp(-1/x) continued by 0 for x <= 0
RJet mollifier(const RJet& x) {
  if (x.c[0] <= 0.0) return RJet(0.0);
  return exp(RJet(0.0) - (RJet(1.0) / x));
}

// smooth ramp: 0 for x <= 0, 1 for x >= 1, h(x)/(h(x)+h(1-x)) between;
// sharpness >= 1 narrows the transition around x = 1/2
RJet smooth_ramp(RJet x, double sharpness) {
  if (sharpness != 1.0) {
    for (int k = 0; k <= kMaxJetOrder; ++k) x.c[k] *= sharpness;
    x.c[0] += 0.5 * (1.0 - sharpness);
  }
  if (x.c[0] <= 0.0) return RJet(0.0);
  if (x.c[0] >= 1.0) return RJet(1.0);
  const RJet h = mollifier(x);
  const RJet g = mollifier(RJet(1.0) - x);
  return h / (h + g);
}

// psi(u) = ramp(u+1) - ramp(u); supported in (-1, 1), translates sum to 1
RJet psi_jet(const RJet& u, double sharpness) {
  return smooth_ramp(u + 1.0, sharpness) - smooth_ramp(u, sharpness);
}

double ramp_value(double x, double sharpness) {
  x = 0.5 + sharpness * (x - 0.5);
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double h = std::exp(-1.0 / x);
  const double g = std::exp(-1.0 / (1.0 - x));
  return h / (h + g);
}

// scalar fast path of psi_jet for value-only call sites
double psi_value(double u, double sharpness) {
  if (u <= -1.0 || u >= 1.0) return 0.0;
  return ramp_value(u + 1.0, sharpness) - ramp_value(u, sharpness);
}

// phi_n as a jet in t: psi(log2 t - n)
RJet phi_jet_at(int n, double t, double sharpness) {
  RJet tj = RJet::variable(t);
  RJet u = log(tj);
  for (int k = 0; k <= kMaxJetOrder; ++k) u.c[k] /= kLog2;
  u.c[0] -= static_cast<double>(n);
  return psi_jet(u, sharpness);
}

}  // namespace

// --- ScalarFunction --------------------------------------------------------

ScalarFunction ScalarFunction::from_values(std::string label,
                                           std::function<cplx(double)> value,
                                           int max_order) {
  // Richardson-extrapolated central differences, symmetric in log t.
  auto shared = std::make_shared<std::function<cplx(double)>>(std::move(value));
  std::function<cplx(int, double)> deriv = [shared](int k, double t) -> cplx {
    std::function<cplx(double)> g = *shared;
    for (int level = 0; level < k; ++level) {
      g = [g](double s) -> cplx {
        const double h = 1e-4;
        auto diff = [&](double step) {
          return (g(s * std::exp(step)) - g(s * std::exp(-step))) /
                 (s * (std::exp(step) - std::exp(-step)));
        };
        return (4.0 * diff(h / 2) - diff(h)) / 3.0;
      };
    }
    return g(t);
  };
  auto val = [shared](double t) { return (*shared)(t); };
  return ScalarFunction(std::move(label), max_order, val, deriv);
}

ScalarFunction ScalarFunction::scaled(cplx factor) const {
  auto v = value_;
  auto d = derivative_;
  return ScalarFunction(label_, max_order_,
                        [v, factor](double t) { return factor * v(t); },
                        [d, factor](int k, double t) { return factor * d(k, t); });
}

ScalarFunction ScalarFunction::dilated(double r) const {
  auto v = value_;
  auto d = derivative_;
  return ScalarFunction(label_ + "#dil", max_order_,
                        [v, r](double t) { return v(r * t); },
                        [d, r](int k, double t) { return std::pow(r, k) * d(k, r * t); });
}

// --- DyadicPartition --------------------------------------------------------

DyadicPartition::DyadicPartition(int max_index, double sharpness)
    : max_index_(max_index), sharpness_(sharpness) {}

double DyadicPartition::phi(int n, double t) const {
  if (t <= 0.0) return 0.0;
  return psi_value(std::log2(t) - n, sharpness_);
}

cplx DyadicPartition::phi_derivative(int n, int k, double t) const {
  if (t <= 0.0) return 0.0;
  const double u = std::log2(t) - n;
  if (u <= -1.0 || u >= 1.0) return 0.0;
  return phi_jet_at(n, t, sharpness_).derivative(k);
}

ScalarFunction DyadicPartition::bump(int n) const {
  const double sh = sharpness_;
  const int nn = n;
  return ScalarFunction(
      "phi_" + std::to_string(n), kMaxJetOrder,
      [nn, sh](double t) -> cplx {
        if (t <= 0.0) return 0.0;
        return psi_value(std::log2(t) - nn, sh);
      },
      [nn, sh](int k, double t) -> cplx {
        if (t <= 0.0) return 0.0;
        const double u = std::log2(t) - nn;
        if (u <= -1.0 || u >= 1.0) return 0.0;
        return phi_jet_at(nn, t, sh).derivative(k);
      });
}

DyadicPartition make_partition(int max_index, double transition_sharpness) {
  if (max_index < 1) throw InvalidSpecError("partition index range must be at least 1");
  if (transition_sharpness < 1.0)
    throw InvalidSpecError("transition sharpness below 1 would break the telescoping sum");
  return DyadicPartition(max_index, transition_sharpness);
}

// --- FunctionMatrix ---------------------------------------------------------

FunctionMatrix::FunctionMatrix(std::size_t n, std::vector<ScalarFunction> entries)
    : n_(n), entries_(std::move(entries)) {
  if (entries_.size() != n_ * n_)
    throw DimensionMismatchError("function matrix needs n*n entries");
  for (const auto& f : entries_)
    if (f.max_order() != entries_.front().max_order())
      throw InvalidSpecError("function matrix entries must share max_order");
}

// --- presets ----------------------------------------------------------------

ScalarFunction preset_imag_power(double s) {
  const cplx is(0.0, s);
  std::ostringstream name;
  name << "imag_power(" << s << ")";
  return ScalarFunction(
      name.str(), kMaxJetOrder,
      [is](double t) { return std::exp(is * std::log(t)); },
      [is](int k, double t) {
        CJet tj = CJet::variable(cplx(t));
        return exp(is * log(tj)).derivative(k);
      });
}

ScalarFunction preset_exp_decay() {
  return ScalarFunction(
      "exp_decay", kMaxJetOrder,
      [](double t) -> cplx { return std::exp(-t); },
      [](int k, double t) -> cplx {
        return ((k % 2) ? -1.0 : 1.0) * std::exp(-t);
      });
}

ScalarFunction preset_resolvent_kernel(double theta, double t) {
  const cplx pole = std::polar(t, theta);  // e^{i theta} t
  const cplx scale(t);
  std::ostringstream name;
  name << "resolvent_kernel(" << theta << "," << t << ")";
  return ScalarFunction(
      name.str(), kMaxJetOrder,
      [pole, scale](double lam) { return scale / (pole - lam); },
      [pole, scale](int k, double lam) {
        CJet lj = CJet::variable(cplx(lam));
        return (CJet(scale) / (CJet(pole) - lj)).derivative(k);
      });
}

ScalarFunction preset_bump(double sharpness) {
  return make_partition(1, sharpness).bump(0);
}

ScalarFunction preset_bump_combo(std::uint64_t seed, std::size_t count) {
  CounterRng rng(seed, 0xb0);
  struct Term {
    double coeff;
    double dilation;  // f uses phi0(t / d)
  };
  auto terms = std::make_shared<std::vector<Term>>();
  for (std::size_t i = 0; i < count; ++i) {
    const double c = 2.0 * rng.next_uniform() - 1.0;
    const double u = 4.0 * rng.next_uniform() - 2.0;
    terms->push_back({c, std::pow(2.0, u)});
  }
  const double sh = 1.0;
  std::ostringstream name;
  name << "bump_combo(" << seed << "," << count << ")";
  return ScalarFunction(
      name.str(), kMaxJetOrder,
      [terms, sh](double t) -> cplx {
        double s = 0.0;
        for (const Term& tm : *terms) {
          const double x = t / tm.dilation;
          if (x <= 0.5 || x >= 2.0) continue;
          s += tm.coeff * psi_value(std::log2(x), sh);
        }
        return s;
      },
      [terms, sh](int k, double t) -> cplx {
        cplx s = 0.0;
        for (const Term& tm : *terms) {
          const double x = t / tm.dilation;
          if (x <= 0.5 || x >= 2.0) continue;
          const double dk = phi_jet_at(0, x, sh).derivative(k);
          s += tm.coeff * dk / std::pow(tm.dilation, k);
        }
        return s;
      });
}

ScalarFunction preset_constant(cplx c) {
  return ScalarFunction(
      "constant", kMaxJetOrder, [c](double) { return c; },
      [](int, double) -> cplx { return 0.0; });
}

ScalarFunction make_preset(const std::string& spec) {
  std::string name = spec;
  std::vector<double> args;
  const auto open = spec.find('(');
  if (open != std::string::npos) {
    if (spec.back() != ')') throw InvalidSpecError("malformed preset: " + spec);
    name = spec.substr(0, open);
    std::string body = spec.substr(open + 1, spec.size() - open - 2);
    std::stringstream ss(body);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (!tok.empty()) args.push_back(std::stod(tok));
    }
  }
  auto need = [&](std::size_t n) {
    if (args.size() != n)
      throw InvalidSpecError("preset " + name + " expects " + std::to_string(n) + " argument(s)");
  };
  if (name == "imag_power") { need(1); return preset_imag_power(args[0]); }
  if (name == "exp_decay") { need(0); return preset_exp_decay(); }
  if (name == "resolvent_kernel") { need(2); return preset_resolvent_kernel(args[0], args[1]); }
  if (name == "bump") {
    if (args.empty()) return preset_bump();
    need(1);
    return preset_bump(args[0]);
  }
  if (name == "bump_combo") {
    need(2);
    return preset_bump_combo(static_cast<std::uint64_t>(args[0]),
                             static_cast<std::size_t>(args[1]));
  }
  if (name == "constant") { need(1); return preset_constant(args[0]); }
  throw InvalidSpecError("unknown preset: " + name);
}

}  // namespace sectorlab
