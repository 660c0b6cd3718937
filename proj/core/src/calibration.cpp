#include "datrack/calibration.hpp"

#include <algorithm>
#include <cmath>

namespace datrack {

namespace {

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

ScoreCalibration::ScoreCalibration(double reference, CalibrationConfig config)
    : reference_(reference), config_(config), top_(logistic(config.gain * (1.0 - config.midpoint))) {}

double ScoreCalibration::ratio(double raw) const noexcept {
  if (!(reference_ > 0.0)) return 0.0;
  return raw / reference_;
}

double ScoreCalibration::operator()(double raw) const noexcept {
  const double r = ratio(raw);
  if (r >= 1.0) return 1.0;
  return std::clamp(logistic(config_.gain * (r - config_.midpoint)) / top_, 0.0, 1.0);
}

}  // namespace datrack
