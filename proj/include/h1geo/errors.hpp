#pragma once

#include <stdexcept>
#include <string>

namespace h1geo {

// Base class for every failure raised by the library. CLI drivers map
// subclasses onto process exit codes; tests catch them by type.
struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A vector that must lie in the horizontal distribution has a e0-component
// above the relative threshold.
struct NonHorizontal : GeometryError {
  using GeometryError::GeometryError;
};

// Exact division by zero inside jet arithmetic.
struct DivisionByZero : GeometryError {
  using GeometryError::GeometryError;
};

// Argument outside the domain of an elementary function (sqrt of a
// non-positive value, atan2 of the zero pair).
struct DomainError : GeometryError {
  using GeometryError::GeometryError;
};

// The tangent plane is horizontal at this parameter point: every surface
// invariant built from the characteristic direction is undefined here.
struct CharacteristicPoint : GeometryError {
  double u, v, margin;
  CharacteristicPoint(double u_, double v_, double m_)
      : GeometryError("characteristic point at (u, v) = (" + std::to_string(u_) +
                      ", " + std::to_string(v_) + "), margin " + std::to_string(m_)),
        u(u_), v(v_), margin(m_) {}
};

// The coordinate tangents are linearly dependent.
struct DegenerateImmersion : GeometryError {
  double u, v;
  DegenerateImmersion(double u_, double v_)
      : GeometryError("degenerate immersion at (u, v) = (" + std::to_string(u_) +
                      ", " + std::to_string(v_) + ")"),
        u(u_), v(v_) {}
};

// A curve that must be transverse (e0(gamma') != 0) fails the margin test.
struct NonTransverse : GeometryError {
  double t, margin;
  NonTransverse(double t_, double m_)
      : GeometryError("curve tangent not transverse at t = " + std::to_string(t_) +
                      ", margin " + std::to_string(m_)),
        t(t_), margin(m_) {}
};

// Adaptive quadrature hit the subdivision depth cap before meeting tolerance.
struct NonConvergence : GeometryError {
  using GeometryError::GeometryError;
};

// Catalog lookup failures.
struct UnknownEntry : GeometryError {
  using GeometryError::GeometryError;
};
struct BadParams : GeometryError {
  using GeometryError::GeometryError;
};

// Malformed or missing configuration input (CLI layer).
struct ConfigError : GeometryError {
  using GeometryError::GeometryError;
};

}  // namespace h1geo
