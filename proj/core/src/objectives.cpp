#include "polycone/objectives.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace polycone {

namespace {

using Eigen::VectorXd;

const std::array<ObjectiveSpec, 14> kCatalog = {{
    {ObjectiveId::cq, "cq", 2, 2, "convex quadratic"},
    {ObjectiveId::fc, "fc", 2, 2, "fractional convex"},
    {ObjectiveId::eR, "eR", 0, 5, "extended Rosenbrock (More, Garbow, Hillstrom)"},
    {ObjectiveId::FR, "FR", 2, 2, "Freudenstein and Roth (More, Garbow, Hillstrom)"},
    {ObjectiveId::Pbs, "Pbs", 2, 2, "Powell badly scaled (More, Garbow, Hillstrom)"},
    {ObjectiveId::B, "B", 2, 2, "Beale (More, Garbow, Hillstrom)"},
    {ObjectiveId::Ps, "Ps", 4, 4, "Powell singular (More, Garbow, Hillstrom)"},
    {ObjectiveId::W, "W", 4, 4, "Wood (More, Garbow, Hillstrom)"},
    {ObjectiveId::qp, "qp", 0, 5, "quartic polynomial"},
    {ObjectiveId::LY, "LY", 2, 2, "Luenberger-Ye"},
    {ObjectiveId::ex4_1_5, "ex4_1_5", 2, 2, "MINLPLib ex4_1_5"},
    {ObjectiveId::ex8_1_4, "ex8_1_4", 2, 2, "MINLPLib ex8_1_4"},
    {ObjectiveId::ex8_1_5, "ex8_1_5", 2, 2, "MINLPLib ex8_1_5"},
    {ObjectiveId::ex8_1_6, "ex8_1_6", 2, 2, "MINLPLib ex8_1_6 (first bracket as printed)"},
}};

void require_dimension(ObjectiveId id, const VectorXd& x) {
  const ObjectiveSpec& spec = objective_spec(id);
  const bool ok = spec.fixed_dimension > 0 ? x.size() == spec.fixed_dimension : x.size() >= 2;
  if (!ok) {
    throw std::invalid_argument("objective " + spec.name + ": unexpected dimension " +
                                std::to_string(x.size()));
  }
}

double sanitize(double v) { return std::isnan(v) ? std::numeric_limits<double>::infinity() : v; }

VectorXd point(std::initializer_list<double> values) {
  VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

// sum_i i (x_i - 1), 1-based weights.
double weighted_offset(const VectorXd& x) {
  double t = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) t += static_cast<double>(i + 1) * (x(i) - 1.0);
  return t;
}

}  // namespace

std::span<const ObjectiveSpec> all_objectives() { return kCatalog; }

const ObjectiveSpec& objective_spec(ObjectiveId id) {
  return kCatalog[static_cast<std::size_t>(id)];
}

std::optional<ObjectiveId> parse_objective(std::string_view name) {
  for (const auto& spec : kCatalog) {
    if (spec.name == name) return spec.id;
  }
  return std::nullopt;
}

std::string_view objective_name(ObjectiveId id) { return objective_spec(id).name; }

int resolve_dimension(ObjectiveId id, int requested) {
  const ObjectiveSpec& spec = objective_spec(id);
  if (requested == 0) return spec.default_dimension;
  if (spec.fixed_dimension > 0 && requested != spec.fixed_dimension) {
    throw std::invalid_argument("objective " + spec.name + " has fixed dimension " +
                                std::to_string(spec.fixed_dimension));
  }
  if (requested < 2) throw std::invalid_argument("objective dimension must be >= 2");
  return requested;
}

std::vector<KnownMinimizer> known_minimizers(ObjectiveId id, int n) {
  n = resolve_dimension(id, n);
  switch (id) {
    case ObjectiveId::cq:
    case ObjectiveId::fc:
    case ObjectiveId::ex8_1_4:
      return {{point({0.0, 0.0})}};
    case ObjectiveId::eR:
    case ObjectiveId::qp:
      return {{VectorXd::Ones(n)}};
    case ObjectiveId::FR:
      // Second point: the published (11.41..., -0.8968...) refined by Newton.
      return {{point({5.0, 4.0})}, {point({11.412778986902094, -0.89680525327447652})}};
    case ObjectiveId::Pbs:
      // Published truncated as (1.098...e-5, 9.106...).
      return {{point({1.0981593296998175e-5, 9.1061467398665240}), 1e-3}};
    case ObjectiveId::B:
      return {{point({3.0, 0.5})}};
    case ObjectiveId::Ps:
      return {{VectorXd::Zero(4)}};
    case ObjectiveId::W:
      return {{VectorXd::Ones(4)}};
    case ObjectiveId::LY:
      return {{point({20.0, 3.0})}};
    case ObjectiveId::ex4_1_5:
      // The off-origin pair lies on x2 = x1 / 2, i.e. (+-1.74755, +-0.87378).
      return {{point({0.0, 0.0})},
              {point({1.74755, 0.87378}), 1e-3},
              {point({-1.74755, -0.87378}), 1e-3}};
    case ObjectiveId::ex8_1_5:
      return {{point({0.0, 0.0})}, {point({0.089842013100318062, -0.71265640302073963})}};
    case ObjectiveId::ex8_1_6:
      // Listed for the library formula; the first bracket here is not
      // squared, so these are not stationary points of what we evaluate.
      return {{point({1.0004, 1.0004}), 1e-3, true}, {point({3.99995, 3.99995}), 1e-3, true}};
  }
  return {};
}

double evaluate(ObjectiveId id, const VectorXd& x) {
  require_dimension(id, x);
  switch (id) {
    case ObjectiveId::cq:
      return x.squaredNorm();
    case ObjectiveId::fc: {
      double f = 0.0;
      for (Eigen::Index i = 0; i < x.size(); ++i) f += x(i) * x(i) / (1.0 + std::abs(x(i)));
      return sanitize(f);
    }
    case ObjectiveId::eR: {
      double f = 0.0;
      for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
        const double a = 1.0 - x(i);
        const double b = x(i + 1) - x(i) * x(i);
        f += a * a + 100.0 * b * b;
      }
      return sanitize(f);
    }
    case ObjectiveId::FR: {
      const double a = -13.0 + x(0) + ((5.0 - x(1)) * x(1) - 2.0) * x(1);
      const double b = -29.0 + x(0) + ((x(1) + 1.0) * x(1) - 14.0) * x(1);
      return sanitize(a * a + b * b);
    }
    case ObjectiveId::Pbs: {
      const double a = 1e4 * x(0) * x(1) - 1.0;
      const double b = std::exp(-x(0)) + std::exp(-x(1)) - 1.0001;
      return sanitize(a * a + b * b);
    }
    case ObjectiveId::B: {
      const double a = 1.5 - x(0) * (1.0 - x(1));
      const double b = 2.25 - x(0) * (1.0 - x(1) * x(1));
      const double c = 2.625 - x(0) * (1.0 - x(1) * x(1) * x(1));
      return sanitize(a * a + b * b + c * c);
    }
    case ObjectiveId::Ps: {
      const double a = x(0) + 10.0 * x(1);
      const double b = x(2) - x(3);
      const double c = x(1) - 2.0 * x(2);
      const double d = x(0) - x(3);
      return sanitize(a * a + std::sqrt(5.0) * b * b + std::pow(c, 4) + 10.0 * std::pow(d, 4));
    }
    case ObjectiveId::W: {
      const double a = x(1) - x(0) * x(0);
      const double b = 1.0 - x(0);
      const double c = x(3) - x(2) * x(2);
      const double d = 1.0 - x(2);
      const double e = x(1) + x(3) - 2.0;
      const double g = x(1) - x(3);
      return sanitize(100.0 * a * a + b * b + 90.0 * c * c + d * d + 10.0 * e * e + g * g / 10.0);
    }
    case ObjectiveId::qp: {
      const double t = weighted_offset(x);
      return sanitize((x.array() - 1.0).square().sum() + t * t + t * t * t * t);
    }
    case ObjectiveId::LY:
      return sanitize(x(0) * x(0) - 5.0 * x(0) * x(1) + std::pow(x(1), 4) - 25.0 * x(0) - 8.0 * x(1));
    case ObjectiveId::ex4_1_5: {
      const double a = x(0);
      return sanitize(2.0 * a * a - 1.05 * std::pow(a, 4) + (5.0 / 30.0) * std::pow(a, 6) -
                      a * x(1) + x(1) * x(1));
    }
    case ObjectiveId::ex8_1_4: {
      const double a = x(0);
      return sanitize(12.0 * a * a - 6.3 * std::pow(a, 4) + std::pow(a, 6) - 6.0 * a * x(1) +
                      6.0 * x(1) * x(1));
    }
    case ObjectiveId::ex8_1_5: {
      const double a = x(0);
      const double b = x(1);
      return sanitize(4.0 * a * a - 2.1 * std::pow(a, 4) + std::pow(a, 6) / 3.0 + a * b -
                      4.0 * b * b + 4.0 * std::pow(b, 4));
    }
    case ObjectiveId::ex8_1_6: {
      const double u = 0.1 + (x(0) - 4.0) + (x(1) - 4.0) * (x(1) - 4.0);
      const double v = 0.2 + (x(0) - 1.0) * (x(0) - 1.0) + (x(1) - 1.0) * (x(1) - 1.0);
      const double w = 0.2 + (x(0) - 8.0) * (x(0) - 8.0) + (x(1) - 8.0) * (x(1) - 8.0);
      return sanitize(1.0 / u - 1.0 / v - 1.0 / w);
    }
  }
  return 0.0;
}

VectorXd gradient(ObjectiveId id, const VectorXd& x) {
  require_dimension(id, x);
  VectorXd g = VectorXd::Zero(x.size());
  switch (id) {
    case ObjectiveId::cq:
      g = 2.0 * x;
      break;
    case ObjectiveId::fc:
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double a = std::abs(x(i));
        g(i) = x(i) * (2.0 + a) / ((1.0 + a) * (1.0 + a));
      }
      break;
    case ObjectiveId::eR:
      for (Eigen::Index i = 0; i + 1 < x.size(); ++i) {
        const double b = x(i + 1) - x(i) * x(i);
        g(i) += -2.0 * (1.0 - x(i)) - 400.0 * x(i) * b;
        g(i + 1) += 200.0 * b;
      }
      break;
    case ObjectiveId::FR: {
      const double y = x(1);
      const double a = -13.0 + x(0) + ((5.0 - y) * y - 2.0) * y;
      const double b = -29.0 + x(0) + ((y + 1.0) * y - 14.0) * y;
      g(0) = 2.0 * a + 2.0 * b;
      g(1) = 2.0 * a * (10.0 * y - 3.0 * y * y - 2.0) + 2.0 * b * (3.0 * y * y + 2.0 * y - 14.0);
      break;
    }
    case ObjectiveId::Pbs: {
      const double a = 1e4 * x(0) * x(1) - 1.0;
      const double b = std::exp(-x(0)) + std::exp(-x(1)) - 1.0001;
      g(0) = 2.0 * a * 1e4 * x(1) - 2.0 * b * std::exp(-x(0));
      g(1) = 2.0 * a * 1e4 * x(0) - 2.0 * b * std::exp(-x(1));
      break;
    }
    case ObjectiveId::B: {
      const double y = x(1);
      const double a = 1.5 - x(0) * (1.0 - y);
      const double b = 2.25 - x(0) * (1.0 - y * y);
      const double c = 2.625 - x(0) * (1.0 - y * y * y);
      g(0) = -2.0 * (a * (1.0 - y) + b * (1.0 - y * y) + c * (1.0 - y * y * y));
      g(1) = 2.0 * x(0) * (a + 2.0 * b * y + 3.0 * c * y * y);
      break;
    }
    case ObjectiveId::Ps: {
      const double a = x(0) + 10.0 * x(1);
      const double b = x(2) - x(3);
      const double c3 = std::pow(x(1) - 2.0 * x(2), 3);
      const double d3 = std::pow(x(0) - x(3), 3);
      const double r5 = std::sqrt(5.0);
      g(0) = 2.0 * a + 40.0 * d3;
      g(1) = 20.0 * a + 4.0 * c3;
      g(2) = 2.0 * r5 * b - 8.0 * c3;
      g(3) = -2.0 * r5 * b - 40.0 * d3;
      break;
    }
    case ObjectiveId::W: {
      const double a = x(1) - x(0) * x(0);
      const double c = x(3) - x(2) * x(2);
      const double e = x(1) + x(3) - 2.0;
      const double h = x(1) - x(3);
      g(0) = -400.0 * x(0) * a - 2.0 * (1.0 - x(0));
      g(1) = 200.0 * a + 20.0 * e + h / 5.0;
      g(2) = -360.0 * x(2) * c - 2.0 * (1.0 - x(2));
      g(3) = 180.0 * c + 20.0 * e - h / 5.0;
      break;
    }
    case ObjectiveId::qp: {
      const double t = weighted_offset(x);
      const double dt = 2.0 * t + 4.0 * t * t * t;
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        g(i) = 2.0 * (x(i) - 1.0) + dt * static_cast<double>(i + 1);
      }
      break;
    }
    case ObjectiveId::LY:
      g(0) = 2.0 * x(0) - 5.0 * x(1) - 25.0;
      g(1) = -5.0 * x(0) + 4.0 * std::pow(x(1), 3) - 8.0;
      break;
    case ObjectiveId::ex4_1_5: {
      const double a = x(0);
      g(0) = 4.0 * a - 4.2 * std::pow(a, 3) + std::pow(a, 5) - x(1);
      g(1) = -a + 2.0 * x(1);
      break;
    }
    case ObjectiveId::ex8_1_4: {
      const double a = x(0);
      g(0) = 24.0 * a - 25.2 * std::pow(a, 3) + 6.0 * std::pow(a, 5) - 6.0 * x(1);
      g(1) = -6.0 * a + 12.0 * x(1);
      break;
    }
    case ObjectiveId::ex8_1_5: {
      const double a = x(0);
      const double b = x(1);
      g(0) = 8.0 * a - 8.4 * std::pow(a, 3) + 2.0 * std::pow(a, 5) + b;
      g(1) = a - 8.0 * b + 16.0 * std::pow(b, 3);
      break;
    }
    case ObjectiveId::ex8_1_6: {
      const double u = 0.1 + (x(0) - 4.0) + (x(1) - 4.0) * (x(1) - 4.0);
      const double v = 0.2 + (x(0) - 1.0) * (x(0) - 1.0) + (x(1) - 1.0) * (x(1) - 1.0);
      const double w = 0.2 + (x(0) - 8.0) * (x(0) - 8.0) + (x(1) - 8.0) * (x(1) - 8.0);
      const double iu = 1.0 / (u * u);
      const double iv = 1.0 / (v * v);
      const double iw = 1.0 / (w * w);
      g(0) = -iu + 2.0 * (x(0) - 1.0) * iv + 2.0 * (x(0) - 8.0) * iw;
      g(1) = -2.0 * (x(1) - 4.0) * iu + 2.0 * (x(1) - 1.0) * iv + 2.0 * (x(1) - 8.0) * iw;
      break;
    }
  }
  return g;
}

double finite_difference_check(ObjectiveId id, const VectorXd& x, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite_difference_check: h must be positive");
  const VectorXd g = gradient(id, x);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    VectorXd xp = x;
    VectorXd xm = x;
    xp(i) += h;
    xm(i) -= h;
    const double fd = (evaluate(id, xp) - evaluate(id, xm)) / (2.0 * h);
    const double denom = std::max({1.0, std::abs(g(i)), std::abs(fd)});
    worst = std::max(worst, std::abs(g(i) - fd) / denom);
  }
  return worst;
}

}  // namespace polycone
