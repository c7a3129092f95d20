#include "tag/vibration.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "tag/rng.hpp"

namespace tag {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMaxCondition = 1e12;

std::uint64_t observer_stream(Observer o) {
    switch (o) {
        case Observer::wearable: return 1;
        case Observer::device: return 2;
        case Observer::eavesdropper: return 3;
    }
    return 0;
}

struct Biquad {
    double b0, b1, b2, a1, a2;
    double z1 = 0.0, z2 = 0.0;
    double step(double x) {
        const double y = b0 * x + z1;
        z1 = b1 * x - a1 * y + z2;
        z2 = b2 * x - a2 * y;
        return y;
    }
};

Biquad lowpass_section(double fc, double fs, double q) {
    const double w0 = kTwoPi * fc / fs;
    const double alpha = std::sin(w0) / (2.0 * q);
    const double c = std::cos(w0);
    const double a0 = 1.0 + alpha;
    return Biquad{(1.0 - c) / 2.0 / a0, (1.0 - c) / a0, (1.0 - c) / 2.0 / a0, -2.0 * c / a0,
                  (1.0 - alpha) / a0};
}
}  // namespace

void validate(const MechSystem& sys) {
    const auto n = sys.masses.size();
    if (n < 2) throw ConfigError("MechSystem needs at least 2 degrees of freedom");
    if (sys.stiffnesses.size() != n) throw ConfigError("MechSystem: stiffness count must equal mass count");
    for (double m : sys.masses)
        if (!(m > 0.0) || !std::isfinite(m)) throw ConfigError("MechSystem: masses must be positive and finite");
    for (double k : sys.stiffnesses)
        if (!(k > 0.0) || !std::isfinite(k))
            throw ConfigError("MechSystem: stiffnesses must be positive and finite");
    if (!(sys.damping_ratio > 0.0 && sys.damping_ratio <= 0.2))
        throw ConfigError("MechSystem: damping ratio must lie in (0, 0.2]");
}

Eigen::MatrixXd mass_matrix(const MechSystem& sys) {
    const auto n = static_cast<Eigen::Index>(sys.masses.size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) m(i, i) = sys.masses[i];
    return m;
}

Eigen::MatrixXd stiffness_matrix(const MechSystem& sys) {
    const auto n = static_cast<Eigen::Index>(sys.masses.size());
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        k(i, i) = sys.stiffnesses[i] + (i + 1 < n ? sys.stiffnesses[i + 1] : 0.0);
        if (i + 1 < n) k(i, i + 1) = k(i + 1, i) = -sys.stiffnesses[i + 1];
    }
    return k;
}

ModalBasis modal_basis(const MechSystem& sys) {
    validate(sys);
    const Eigen::MatrixXd k = stiffness_matrix(sys);
    const Eigen::MatrixXd m = mass_matrix(sys);

    Eigen::LLT<Eigen::MatrixXd> llt(k);
    if (llt.info() != Eigen::Success) throw DegenerateSystemError("stiffness matrix is not positive definite");

    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(k, m);
    if (es.info() != Eigen::Success) throw DegenerateSystemError("generalized eigensolver did not converge");
    const Eigen::VectorXd lambda = es.eigenvalues();
    if (!(lambda(0) > 0.0) || lambda(lambda.size() - 1) / lambda(0) > kMaxCondition)
        throw DegenerateSystemError("eigenproblem is singular or ill-conditioned (condition " +
                                    std::to_string(lambda(lambda.size() - 1) / lambda(0)) + ")");

    ModalBasis out;
    out.omega = lambda.array().sqrt();
    out.shapes = es.eigenvectors();
    for (Eigen::Index r = 0; r < out.shapes.cols(); ++r) {
        const double norm = std::sqrt(out.shapes.col(r).transpose() * m * out.shapes.col(r));
        out.shapes.col(r) /= norm;
    }
    return out;
}

std::vector<double> natural_frequencies(const MechSystem& sys) {
    const ModalBasis mb = modal_basis(sys);
    return {mb.omega.data(), mb.omega.data() + mb.omega.size()};
}

std::complex<double> receptance(const MechSystem& sys, const ModalBasis& modes, std::size_t drive,
                                std::size_t response, double omega) {
    const auto n = static_cast<std::size_t>(modes.omega.size());
    if (drive >= n || response >= n) throw ConfigError("receptance: dof index out of range");
    std::complex<double> h{0.0, 0.0};
    const double z = sys.damping_ratio;
    for (Eigen::Index r = 0; r < modes.omega.size(); ++r) {
        const double wr = modes.omega(r);
        const double num = modes.shapes(static_cast<Eigen::Index>(response), r) *
                           modes.shapes(static_cast<Eigen::Index>(drive), r);
        h += num / std::complex<double>(wr * wr - omega * omega, 2.0 * z * wr * omega);
    }
    return h;
}

std::complex<double> frf(const MechSystem& sys, std::size_t drive, std::size_t response, double omega) {
    if (!(omega > 0.0)) throw ConfigError("frf: omega must be positive");
    const ModalBasis mb = modal_basis(sys);
    const std::complex<double> h0 = receptance(sys, mb, drive, response, 0.0);
    return receptance(sys, mb, drive, response, omega) / h0.real();
}

std::size_t SweepExcitation::step_count() const {
    if (f_end <= f_start) return 1;
    return static_cast<std::size_t>(std::floor((f_end - f_start) / step_hz + 1e-9)) + 1;
}

double SweepExcitation::dwell() const {
    return dwell_per_step > 0.0 ? dwell_per_step : duration / static_cast<double>(step_count());
}

double SweepExcitation::step_frequency(std::size_t k) const {
    return f_start + static_cast<double>(k) * step_hz;
}

const char* to_string(Observer o) {
    switch (o) {
        case Observer::wearable: return "wearable";
        case Observer::device: return "device";
        case Observer::eavesdropper: return "eavesdropper";
    }
    return "unknown";
}

void validate(const TrialScene& scene) {
    validate(scene.system);
    const auto& ex = scene.excitation;
    if (!(ex.f_start >= 20.0)) throw ConfigError("sweep must start at or above 20 Hz");
    if (ex.f_end < ex.f_start) throw ConfigError("sweep end below sweep start");
    if (!(ex.duration > 0.0)) throw ConfigError("sweep duration must be positive");
    if (!(ex.step_hz > 0.0)) throw ConfigError("sweep step must be positive");
    if (ex.dwell() > ex.duration) throw ConfigError("sweep duration shorter than one dwell step");
    if (!(ex.eccentric_mass > 0.0 && ex.eccentric_offset > 0.0))
        throw ConfigError("eccentric mass and offset must be positive");
    const auto n = scene.system.dof_count();
    if (ex.drive_dof >= n || scene.contact_dof >= n) throw ConfigError("scene dof index out of range");
    if (scene.sample_rate < 2.0 * ex.f_end) throw ConfigError("sample rate below twice the sweep end frequency");
    if (scene.noise_sigma_wearable < 0.0 || scene.noise_sigma_device < 0.0 || scene.motion_artifact_amplitude < 0.0)
        throw ConfigError("noise levels must be non-negative");
    if (!(scene.wearable_gain > 0.0)) throw ConfigError("wearable gain must be positive");
}

std::size_t capture_length(const TrialScene& scene, const CaptureWindow& window) {
    return static_cast<std::size_t>(
        std::llround((scene.excitation.duration + 2.0 * window.guard) * scene.sample_rate));
}

namespace {

// Calls fn(sample index, step index, rotor phase) for every sample inside the sweep.
template <typename Fn>
void for_each_sweep_sample(const TrialScene& scene, const CaptureWindow& window, std::size_t n, Fn&& fn) {
    const auto& ex = scene.excitation;
    const std::size_t steps = ex.step_count();
    const double dwell = ex.dwell();
    std::vector<double> phase0(steps, 0.0);
    for (std::size_t k = 1; k < steps; ++k)
        phase0[k] = phase0[k - 1] + kTwoPi * ex.step_frequency(k - 1) * dwell;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / scene.sample_rate - window.guard + window.offset;
        if (t < 0.0 || t >= ex.duration) continue;
        std::size_t k = static_cast<std::size_t>(t / dwell);
        if (k >= steps) k = steps - 1;
        const double w = kTwoPi * ex.step_frequency(k);
        fn(i, k, phase0[k] + w * (t - static_cast<double>(k) * dwell));
    }
}

}  // namespace

std::vector<double> contact_response(const TrialScene& scene, const CaptureWindow& window) {
    validate(scene);
    const auto& ex = scene.excitation;
    const ModalBasis mb = modal_basis(scene.system);
    const std::size_t steps = ex.step_count();
    std::vector<std::complex<double>> amp(steps);
    for (std::size_t k = 0; k < steps; ++k) {
        const double w = kTwoPi * ex.step_frequency(k);
        const double force = ex.eccentric_mass * ex.eccentric_offset * w * w;
        amp[k] = -w * w * force * receptance(scene.system, mb, ex.drive_dof, scene.contact_dof, w);
    }
    const std::size_t n = capture_length(scene, window);
    std::vector<double> out(n, 0.0);
    for_each_sweep_sample(scene, window, n, [&](std::size_t i, std::size_t k, double theta) {
        out[i] = std::abs(amp[k]) * std::sin(theta + std::arg(amp[k]));
    });
    return out;
}

std::vector<double> excitation_force(const TrialScene& scene, const CaptureWindow& window) {
    validate(scene);
    const auto& ex = scene.excitation;
    const std::size_t n = capture_length(scene, window);
    std::vector<double> out(n, 0.0);
    for_each_sweep_sample(scene, window, n, [&](std::size_t i, std::size_t k, double theta) {
        const double w = kTwoPi * ex.step_frequency(k);
        out[i] = ex.eccentric_mass * ex.eccentric_offset * w * w * std::sin(theta);
    });
    return out;
}

std::vector<double> motion_artifact(Rng& rng, std::size_t n, double sample_rate, double amplitude) {
    std::vector<double> x(n, 0.0);
    if (amplitude <= 0.0 || n == 0) return x;
    double vel = 0.0, pos = 0.0;
    for (auto& v : x) {
        vel += rng.normal();
        pos += vel;
        v = pos;
    }
    Biquad s1 = lowpass_section(10.0, sample_rate, 0.54119610);
    Biquad s2 = lowpass_section(10.0, sample_rate, 1.30656296);
    for (auto& v : x) v = s2.step(s1.step(v));
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (auto& v : x) {
        v -= mean;
        ss += v * v;
    }
    const double rms = std::sqrt(ss / static_cast<double>(n));
    if (rms > 0.0)
        for (auto& v : x) v *= amplitude / rms;
    return x;
}

AccelTrace synthesize_trace(const TrialScene& scene, Observer observer, const CaptureWindow& window) {
    if (observer == Observer::eavesdropper)
        throw ConfigError("eavesdropper traces come from the adversary observation model");
    AccelTrace trace;
    trace.sample_rate = scene.sample_rate;
    trace.observer = observer;
    trace.samples = contact_response(scene, window);

    const bool wearable = observer == Observer::wearable;
    const double gain = wearable ? scene.wearable_gain : 1.0;
    const double sigma = wearable ? scene.noise_sigma_wearable : scene.noise_sigma_device;
    const std::uint64_t stream = observer_stream(observer);

    Rng noise(derive_seed(scene.rng_seed, 2 * stream));
    Rng motion(derive_seed(scene.rng_seed, 2 * stream + 1));
    const auto artifact =
        motion_artifact(motion, trace.samples.size(), scene.sample_rate, scene.motion_artifact_amplitude);
    for (std::size_t i = 0; i < trace.samples.size(); ++i) {
        double v = gain * trace.samples[i] + artifact[i];
        if (sigma > 0.0) v += sigma * noise.normal();
        trace.samples[i] = v;
    }
    return trace;
}

}  // namespace tag
