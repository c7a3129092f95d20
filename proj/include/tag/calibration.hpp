#pragma once

namespace tag {

// Frozen output of `tagsim calibrate`. Traces are normalised so the noise-free
// contact acceleration peaks at 1.0; noise values are in those units.
inline constexpr double kSensorNoiseScale = 0.0009;
inline constexpr double kMotionArtifactAmplitude = 0.002;

// Desk-coupled accelerometer: coupling(d) = c0 exp(-d / d0) with coupling(1 inch) = 0.8.
inline constexpr double kDeskCouplingAtOneInch = 0.8;
inline constexpr double kDeskCouplingLength = 0.5;  // inches
inline constexpr double kEavesdropperNoise = 0.011;

// Microphone ambient floor relative to the motor tone at one inch.
inline constexpr double kAcousticAmbientNoise = 0.05;

}  // namespace tag
