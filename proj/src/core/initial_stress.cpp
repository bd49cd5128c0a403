#include "empost/core/initial_stress.hpp"

#include <cmath>
#include <stdexcept>

namespace empost::core {

namespace {
constexpr double kPi = 3.14159265358979323846;

// integral_0^L cos(g*u + phi) du
double cos_integral(double g, double phi, double length) {
  if (std::abs(g) * length < 1e-14) return length * std::cos(phi);
  return (std::sin(g * length + phi) - std::sin(phi)) / g;
}

// integral over one linear piece of (a + b*u) * cos(alpha*u)
double linear_piece_moment(double a, double b, double alpha, double x0,
                           double x1) {
  if (alpha == 0.0) {
    const double f1 = a * x1 + 0.5 * b * x1 * x1;
    const double f0 = a * x0 + 0.5 * b * x0 * x0;
    return f1 - f0;
  }
  auto anti = [&](double u) {
    return (a + b * u) * std::sin(alpha * u) / alpha +
           b * std::cos(alpha * u) / (alpha * alpha);
  };
  return anti(x1) - anti(x0);
}
}  // namespace

InitialStressProfile InitialStressProfile::make_constant(double c) {
  InitialStressProfile p;
  p.kind = Kind::Constant;
  p.constant_value = c;
  return p;
}

InitialStressProfile InitialStressProfile::make_piecewise(
    std::vector<std::pair<double, double>> knots) {
  InitialStressProfile p;
  p.kind = Kind::PiecewiseLinear;
  p.knots = std::move(knots);
  return p;
}

InitialStressProfile InitialStressProfile::make_cosine(double offset,
                                                       double amplitude,
                                                       double frequency,
                                                       double phase) {
  InitialStressProfile p;
  p.kind = Kind::CosineMode;
  p.offset = offset;
  p.amplitude = amplitude;
  p.frequency = frequency;
  p.phase = phase;
  return p;
}

void InitialStressProfile::validate(double length) const {
  if (!(length > 0.0)) {
    throw std::invalid_argument("InitialStressProfile: length must be > 0");
  }
  switch (kind) {
    case Kind::Constant:
      if (!std::isfinite(constant_value)) {
        throw std::invalid_argument("InitialStressProfile: non-finite value");
      }
      break;
    case Kind::PiecewiseLinear: {
      if (knots.size() < 2) {
        throw std::invalid_argument(
            "InitialStressProfile: piecewise profile needs >= 2 knots");
      }
      const double tol = 1e-9 * length;
      if (std::abs(knots.front().first) > tol ||
          std::abs(knots.back().first - length) > tol) {
        throw std::invalid_argument(
            "InitialStressProfile: knots must span [0, L]");
      }
      for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        if (!(knots[i].first < knots[i + 1].first)) {
          throw std::invalid_argument(
              "InitialStressProfile: knot positions must increase");
        }
      }
      for (const auto& [x, y] : knots) {
        if (!std::isfinite(x) || !std::isfinite(y)) {
          throw std::invalid_argument("InitialStressProfile: non-finite knot");
        }
      }
      break;
    }
    case Kind::CosineMode:
      if (!(frequency > 0.0)) {
        throw std::invalid_argument(
            "InitialStressProfile: frequency must be > 0");
      }
      if (!std::isfinite(offset) || !std::isfinite(amplitude) ||
          !std::isfinite(phase)) {
        throw std::invalid_argument("InitialStressProfile: non-finite field");
      }
      break;
  }
}

double InitialStressProfile::value(double x, double length) const {
  switch (kind) {
    case Kind::Constant:
      return constant_value;
    case Kind::PiecewiseLinear: {
      if (x <= knots.front().first) return knots.front().second;
      if (x >= knots.back().first) return knots.back().second;
      for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        if (x <= knots[i + 1].first) {
          const auto& [x0, y0] = knots[i];
          const auto& [x1, y1] = knots[i + 1];
          const double w = (x - x0) / (x1 - x0);
          return y0 + w * (y1 - y0);
        }
      }
      return knots.back().second;
    }
    case Kind::CosineMode:
      return offset +
             amplitude * std::cos(frequency * kPi * x / length + phase);
  }
  return 0.0;
}

double InitialStressProfile::derivative(double x, double length) const {
  switch (kind) {
    case Kind::Constant:
      return 0.0;
    case Kind::PiecewiseLinear: {
      // slope of the piece containing x; endpoints take the adjacent piece
      std::size_t i = 0;
      while (i + 2 < knots.size() && x > knots[i + 1].first) ++i;
      const auto& [x0, y0] = knots[i];
      const auto& [x1, y1] = knots[i + 1];
      return (y1 - y0) / (x1 - x0);
    }
    case Kind::CosineMode: {
      const double beta = frequency * kPi / length;
      return -amplitude * beta * std::sin(beta * x + phase);
    }
  }
  return 0.0;
}

double InitialStressProfile::mean(double length) const {
  return cosine_moment(0.0, length) / length;
}

double InitialStressProfile::cosine_moment(double alpha, double length) const {
  switch (kind) {
    case Kind::Constant:
      if (alpha == 0.0) return constant_value * length;
      return constant_value * std::sin(alpha * length) / alpha;
    case Kind::PiecewiseLinear: {
      double sum = 0.0;
      for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const auto& [x0, y0] = knots[i];
        const auto& [x1, y1] = knots[i + 1];
        const double b = (y1 - y0) / (x1 - x0);
        const double a = y0 - b * x0;
        sum += linear_piece_moment(a, b, alpha, x0, x1);
      }
      return sum;
    }
    case Kind::CosineMode: {
      const double beta = frequency * kPi / length;
      double v = 0.0;
      if (alpha == 0.0) {
        v = offset * length + amplitude * cos_integral(beta, phase, length);
      } else {
        v = offset * std::sin(alpha * length) / alpha;
        v += 0.5 * amplitude *
             (cos_integral(beta + alpha, phase, length) +
              cos_integral(beta - alpha, phase, length));
      }
      return v;
    }
  }
  return 0.0;
}

InitialStressProfile InitialStressProfile::reflected(double length) const {
  switch (kind) {
    case Kind::Constant:
      return *this;
    case Kind::PiecewiseLinear: {
      std::vector<std::pair<double, double>> rev;
      rev.reserve(knots.size());
      for (auto it = knots.rbegin(); it != knots.rend(); ++it) {
        rev.emplace_back(length - it->first, it->second);
      }
      rev.front().first = 0.0;  // absorb roundoff at the ends
      rev.back().first = length;
      return make_piecewise(std::move(rev));
    }
    case Kind::CosineMode:
      return make_cosine(offset, amplitude, frequency,
                         -(frequency * kPi + phase));
  }
  return *this;
}

}  // namespace empost::core
