#include "canonsys/potential.hpp"

#include <cmath>
#include <fstream>

#include "canonsys/errors.hpp"

namespace canonsys {

namespace {

constexpr double kShapeTol = 1e-12;

double grid_max(const std::function<double(double)>& f) {
  double m = 0.0;
  for (double z : check_grid()) m = std::max(m, std::abs(f(z)));
  return m;
}

}  // namespace

PotentialSpec::PotentialSpec(ScalarFunction q1, ScalarFunction q2, ScalarFunction q)
    : q1_(std::move(q1)), q2_(std::move(q2)), q_(std::move(q)) {
  is_constant_ = q1_.is_constant() && q2_.is_constant() && q_.is_constant();
  is_scalar_identity_ = canonsys::is_scalar_identity(*this, kShapeTol);
  is_canonical_form_ = canonsys::is_canonical_form(*this, kShapeTol);
}

PotentialSpec PotentialSpec::constant(double q1, double q2, double q) {
  return {ScalarFunction::constant(q1), ScalarFunction::constant(q2),
          ScalarFunction::constant(q)};
}

PotentialSpec PotentialSpec::scalar(ScalarFunction p) {
  return {p, p, ScalarFunction::constant(0.0)};
}

PotentialSpec PotentialSpec::canonical(ScalarFunction a, ScalarFunction b) {
  ScalarFunction minus_a = combine(-1.0, a, 0.0, ScalarFunction::constant(0.0));
  return {std::move(a), std::move(minus_a), std::move(b)};
}

Mat2 PotentialSpec::derivative(double z) const {
  const double dq = q_.derivative(z);
  return {q1_.derivative(z), dq, dq, q2_.derivative(z)};
}

PotentialSpec shift(const PotentialSpec& spec, double tau) {
  return {spec.q1().shifted(tau), spec.q2().shifted(tau), spec.q().shifted(tau)};
}

PotentialSpec gauge_rotate(const PotentialSpec& spec, double omega) {
  if (!is_canonical_form(spec, 1e-10)) {
    throw NotCanonicalForm("gauge_rotate requires q2 = -q1");
  }
  // e^{2J w}[[a,b],[b,-a]] = [[c a + s b, c b - s a], [., -(c a + s b)]]
  const double c = std::cos(2.0 * omega), s = std::sin(2.0 * omega);
  const ScalarFunction& a = spec.q1();
  const ScalarFunction& b = spec.q();
  return PotentialSpec::canonical(combine(c, a, s, b), combine(c, b, -s, a));
}

double diagonalizing_angle(const PotentialSpec& spec) {
  if (!spec.is_constant() || !spec.is_canonical_form()) {
    throw NotCanonicalForm("diagonalizing_angle needs a constant canonical-form potential");
  }
  return 0.5 * std::atan2(spec.q().constant_value(), spec.q1().constant_value());
}

TraceSplit trace_split(const PotentialSpec& spec) {
  if (!spec.is_absolutely_continuous()) {
    throw ACRequired("trace_split needs absolutely continuous entries");
  }
  ScalarFunction p = combine(0.5, spec.q1(), 0.5, spec.q2());
  ScalarFunction d = combine(0.5, spec.q1(), -0.5, spec.q2());
  const ScalarFunction& q = spec.q();
  const double c = p.mean();

  // h(z) = ((pi - z)/pi) int_0^z p - (z/pi) int_z^pi p = int_0^z p - c z.
  ScalarFunction h;
  if (p.kind() == ScalarFunction::Kind::Constant) {
    h = ScalarFunction::constant(0.0);
  } else if (p.kind() == ScalarFunction::Kind::TrigPoly) {
    h = ScalarFunction::trig(p.as_trig()->periodic_antiderivative());
  } else {
    h = ScalarFunction::composed([p, c](double z) { return p.integral_from_zero(z) - c * z; },
                                 [p, c](double z) { return p(z) - c; });
  }

  // Q - pI is canonical, so e^{-Jh}(Q - pI)e^{Jh} = e^{-2Jh}(Q - pI).
  PotentialSpec tilde;
  if (h.kind() == ScalarFunction::Kind::Constant && h.constant_value() == 0.0) {
    tilde = PotentialSpec::canonical(d, q);
  } else {
    auto a = ScalarFunction::composed(
        [d, q, h](double z) {
          const double t = 2.0 * h(z);
          return std::cos(t) * d(z) - std::sin(t) * q(z);
        },
        [d, q, h](double z) {
          const double t = 2.0 * h(z), dt = 2.0 * h.derivative(z);
          const double ct = std::cos(t), st = std::sin(t);
          return -dt * st * d(z) + ct * d.derivative(z) - dt * ct * q(z) - st * q.derivative(z);
        });
    auto b = ScalarFunction::composed(
        [d, q, h](double z) {
          const double t = 2.0 * h(z);
          return std::cos(t) * q(z) + std::sin(t) * d(z);
        },
        [d, q, h](double z) {
          const double t = 2.0 * h(z), dt = 2.0 * h.derivative(z);
          const double ct = std::cos(t), st = std::sin(t);
          return -dt * st * q(z) + ct * q.derivative(z) + dt * ct * d(z) + st * d.derivative(z);
        });
    tilde = PotentialSpec::canonical(std::move(a), std::move(b));
  }
  return {std::move(p), std::move(h), std::move(tilde), c};
}

bool is_scalar_identity(const PotentialSpec& spec, double tol) {
  const double off = grid_max([&](double z) { return spec.q()(z); });
  const double diag = grid_max([&](double z) { return spec.q1()(z) - spec.q2()(z); });
  return off <= tol && diag <= tol;
}

bool is_canonical_form(const PotentialSpec& spec, double tol) {
  return grid_max([&](double z) { return spec.q1()(z) + spec.q2()(z); }) <= tol;
}

// --- config format -------------------------------------------------------

nlohmann::json to_json(const ScalarFunction& f) {
  using Kind = ScalarFunction::Kind;
  switch (f.kind()) {
    case Kind::Constant:
      return {{"kind", "constant"}, {"value", f.constant_value()}};
    case Kind::TrigPoly: {
      const TrigPoly& t = *f.as_trig();
      return {{"kind", "trigpoly"}, {"a0", t.a0}, {"cos", t.cos_coeffs}, {"sin", t.sin_coeffs}};
    }
    case Kind::Samples: {
      const SampledGrid& s = *f.as_samples();
      return {{"kind", "samples"}, {"values", s.values}, {"offset", s.offset}};
    }
    case Kind::Composed: break;
  }
  throw ConfigError("composed functions have no config representation");
}

ScalarFunction scalar_function_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind")) {
    throw ConfigError("scalar function must be an object with a \"kind\" field");
  }
  auto reject_unknown = [&](std::initializer_list<const char*> allowed) {
    for (const auto& [key, _] : j.items()) {
      bool ok = key == "kind";
      for (const char* a : allowed) ok = ok || key == a;
      if (!ok) throw ConfigError("unknown field \"" + key + "\" in scalar function");
    }
  };
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "constant") {
      reject_unknown({"value"});
      return ScalarFunction::constant(j.at("value").get<double>());
    }
    if (kind == "trigpoly") {
      reject_unknown({"a0", "cos", "sin"});
      return ScalarFunction::trig(j.value("a0", 0.0),
                                  j.value("cos", std::vector<double>{}),
                                  j.value("sin", std::vector<double>{}));
    }
    if (kind == "samples") {
      reject_unknown({"values", "offset"});
      return ScalarFunction::samples(j.at("values").get<std::vector<double>>(),
                                     j.value("offset", 0.0));
    }
    throw ConfigError("unknown scalar function kind \"" + kind + "\"");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed scalar function: ") + e.what());
  }
}

nlohmann::json to_json(const PotentialSpec& spec) {
  return {{"q1", to_json(spec.q1())}, {"q2", to_json(spec.q2())}, {"q", to_json(spec.q())}};
}

PotentialSpec potential_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("potential config must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (key != "q1" && key != "q2" && key != "q") {
      throw ConfigError("unknown field \"" + key + "\" in potential config");
    }
  }
  auto entry = [&](const char* key) {
    return j.contains(key) ? scalar_function_from_json(j.at(key)) : ScalarFunction::constant(0.0);
  };
  return {entry("q1"), entry("q2"), entry("q")};
}

PotentialSpec load_potential(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open potential file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  try {
    return potential_from_json(j);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace canonsys
