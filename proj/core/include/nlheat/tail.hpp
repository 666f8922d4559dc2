#pragma once

#include <cstddef>

#include "nlheat/field.hpp"

namespace nlheat {

enum class TailPart { Absolute, Positive, Negative };

struct TailQuery {
  const SpaceTimeField* field = nullptr;
  Point center{0.0, 0.0};
  double t0 = 0.0;
  double r = 0.0;
  double s = 0.5;
  TailPart part = TailPart::Absolute;
};

struct TailResult {
  double value = 0.0;
  std::size_t samples = 0;  // time steps in (t0 - r^{2s}, t0]
  double sup_time = 0.0;    // time step attaining the sup
};

/// (2s/|S^{n-1}|)·r^{2s}·sup_t ∫_{|y-x0|>r} |u(y,t)|·|y-x0|^{-n-2s} dy, with the
/// field taken piecewise constant on lattice cells inside B_{R_inf-h}(x0) and
/// the exterior rule's sup beyond.
TailResult tail(const TailQuery& query);

double tail_value(const SpaceTimeField& field, const Point& center, double t0, double r, double s,
                  TailPart part = TailPart::Absolute);

}  // namespace nlheat
