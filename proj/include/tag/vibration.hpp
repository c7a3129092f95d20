#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "tag/errors.hpp"

namespace tag {

class Rng;

// Spring-mass chain: element 0 is grounded through stiffnesses[0],
// stiffnesses[i] couples element i-1 to element i.
struct MechSystem {
    std::vector<double> masses;
    std::vector<double> stiffnesses;
    double damping_ratio = 0.03;

    std::size_t dof_count() const { return masses.size(); }
};

void validate(const MechSystem& sys);
Eigen::MatrixXd mass_matrix(const MechSystem& sys);
Eigen::MatrixXd stiffness_matrix(const MechSystem& sys);

// Mass-normalised mode shapes (columns) and natural frequencies in rad/s.
struct ModalBasis {
    Eigen::VectorXd omega;
    Eigen::MatrixXd shapes;
};

ModalBasis modal_basis(const MechSystem& sys);
std::vector<double> natural_frequencies(const MechSystem& sys);

// Dynamic compliance (displacement per unit force) with uniform modal damping.
std::complex<double> receptance(const MechSystem& sys, const ModalBasis& modes, std::size_t drive,
                                std::size_t response, double omega);

// Receptance divided by its static value: the magnification factor.
std::complex<double> frf(const MechSystem& sys, std::size_t drive, std::size_t response, double omega);

struct SweepExcitation {
    double f_start = 20.0;
    double f_end = 125.0;
    double duration = 1.75;
    double eccentric_mass = 1.0;
    double eccentric_offset = 1.0;
    double step_hz = 1.0;
    double dwell_per_step = 0.0;  // 0 selects duration / step_count()
    std::size_t drive_dof = 0;

    std::size_t step_count() const;
    double dwell() const;
    double step_frequency(std::size_t k) const;
};

enum class Observer { wearable, device, eavesdropper };
const char* to_string(Observer o);

struct TrialScene {
    MechSystem system;
    SweepExcitation excitation;
    std::size_t contact_dof = 0;  // element the wristband and device both sense
    double wearable_gain = 1.0;   // forearm transmission from contact to wristband
    double sample_rate = 250.0;
    double noise_sigma_wearable = 0.0;
    double noise_sigma_device = 0.0;
    double motion_artifact_amplitude = 0.0;
    std::uint64_t rng_seed = 0;
};

void validate(const TrialScene& scene);

struct AccelTrace {
    std::vector<double> samples;
    double sample_rate = 250.0;
    Observer observer = Observer::device;
};

// Recording window relative to the sweep: samples cover
// [offset - guard, offset + duration + guard). The motor is idle outside the sweep.
struct CaptureWindow {
    double offset = 0.0;
    double guard = 0.0;
};

std::size_t capture_length(const TrialScene& scene, const CaptureWindow& window = {});

// Noise-free acceleration of the contact element under the stepped sweep.
std::vector<double> contact_response(const TrialScene& scene, const CaptureWindow& window = {});

// Instantaneous motor force m d w^2 sin(theta) on the same time grid.
std::vector<double> excitation_force(const TrialScene& scene, const CaptureWindow& window = {});

// Integrated random walk, 4th-order Butterworth low-pass at 10 Hz, scaled to the given RMS.
std::vector<double> motion_artifact(Rng& rng, std::size_t n, double sample_rate, double amplitude);

AccelTrace synthesize_trace(const TrialScene& scene, Observer observer, const CaptureWindow& window = {});

}  // namespace tag
