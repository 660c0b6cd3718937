#pragma once

namespace datrack {

struct CalibrationConfig {
  double gain = 10.0;
  double midpoint = 0.55;
};

/// Maps raw correlation scores to a [0, 1] detection score.
///
/// The raw score is first expressed as a ratio of `reference` (the score the
/// current target appearance receives), then passed through a logistic curve
/// rescaled so that ratio 1 maps to exactly 1. Ratios above 1 saturate at 1.
class ScoreCalibration {
 public:
  ScoreCalibration() = default;
  ScoreCalibration(double reference, CalibrationConfig config);

  double reference() const noexcept { return reference_; }
  double ratio(double raw) const noexcept;
  double operator()(double raw) const noexcept;

 private:
  double reference_ = 1.0;
  CalibrationConfig config_{};
  double top_ = 1.0;
};

}  // namespace datrack
