#include "tag/scene.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tag/calibration.hpp"
#include "tag/rng.hpp"

namespace tag {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Resonance sampling window and spacing, Hz.
constexpr double kResonanceLow = 21.0;
constexpr double kResonanceHigh = 124.0;
constexpr double kMinSpacing = 10.0;
constexpr double kAntiMargin = 2.0;
constexpr int kMinDof = 4;
constexpr int kMaxDof = 8;
constexpr int kMaxRetries = 64;
}  // namespace

const char* to_string(Posture p) {
    switch (p) {
        case Posture::palm: return "palm";
        case Posture::fist: return "fist";
        case Posture::border: return "border";
        case Posture::corner: return "corner";
    }
    return "unknown";
}

const char* to_string(TouchObject o) {
    switch (o) {
        case TouchObject::cubic: return "cubic";
        case TouchObject::phone: return "phone";
        case TouchObject::mouse: return "mouse";
        case TouchObject::cup: return "cup";
    }
    return "unknown";
}

Posture parse_posture(std::string_view s) {
    for (auto p : {Posture::palm, Posture::fist, Posture::border, Posture::corner})
        if (s == to_string(p)) return p;
    throw ConfigError("unknown posture '" + std::string(s) + "'");
}

TouchObject parse_object(std::string_view s) {
    for (auto o : {TouchObject::cubic, TouchObject::phone, TouchObject::mouse, TouchObject::cup})
        if (s == to_string(o)) return o;
    throw ConfigError("unknown object '" + std::string(s) + "'");
}

std::string describe(const ScenePreset& preset) {
    return std::string(to_string(preset.posture)) + "/loc" + std::to_string(preset.location) + "/" +
           to_string(preset.object);
}

double posture_noise_factor(Posture p) {
    switch (p) {
        case Posture::palm: return 1.0;
        case Posture::fist: return 1.05;
        case Posture::border: return 1.8;
        case Posture::corner: return 3.0;
    }
    return 1.0;
}

double location_gain(int location) {
    static constexpr double gains[] = {1.0, 0.8, 0.65, 0.5, 0.4};
    if (location < 1 || location > 5) throw ConfigError("wearing location must be 1..5");
    return gains[location - 1];
}

double object_noise_factor(TouchObject o) {
    switch (o) {
        case TouchObject::cubic: return 1.0;
        case TouchObject::phone: return 1.2;
        case TouchObject::mouse: return 1.1;
        case TouchObject::cup: return 1.4;
    }
    return 1.0;
}

double object_damping(TouchObject o) {
    switch (o) {
        case TouchObject::cubic: return 0.03;
        case TouchObject::phone: return 0.035;
        case TouchObject::mouse: return 0.04;
        case TouchObject::cup: return 0.025;
    }
    return 0.03;
}

NoiseModel default_noise_model() { return {kSensorNoiseScale, kMotionArtifactAmplitude}; }

MechSystem chain_from_spectra(const std::vector<double>& resonances_hz,
                              const std::vector<double>& antiresonances_hz, double damping_ratio) {
    const std::size_t n = resonances_hz.size();
    if (n < 2 || antiresonances_hz.size() != n - 1)
        throw GenerationError("chain_from_spectra: need n resonances and n-1 antiresonances");
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (!(resonances_hz[i] < antiresonances_hz[i] && antiresonances_hz[i] < resonances_hz[i + 1]))
            throw GenerationError("chain_from_spectra: spectra do not interlace");

    std::vector<double> lam(n), mu(n - 1);
    for (std::size_t i = 0; i < n; ++i) lam[i] = std::pow(kTwoPi * resonances_hz[i], 2);
    for (std::size_t i = 0; i + 1 < n; ++i) mu[i] = std::pow(kTwoPi * antiresonances_hz[i], 2);

    // Residues of the free-end driving-point response.
    Eigen::VectorXd q(static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < n; ++r) {
        double num = 1.0, den = 1.0;
        for (double m : mu) num *= (m - lam[r]);
        for (std::size_t s = 0; s < n; ++s)
            if (s != r) den *= (lam[s] - lam[r]);
        const double w = num / den;
        if (!(w > 0.0)) throw GenerationError("chain_from_spectra: non-positive residue");
        q(static_cast<Eigen::Index>(r)) = w;
    }
    q /= q.sum();
    q = q.array().sqrt();

    // Lanczos on diag(lam) from q gives the Jacobi matrix ordered from the free end.
    const auto N = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd V = Eigen::MatrixXd::Zero(N, N);
    Eigen::VectorXd a(N), b = Eigen::VectorXd::Zero(N > 1 ? N - 1 : 0);
    Eigen::VectorXd lamv = Eigen::Map<Eigen::VectorXd>(lam.data(), N);
    Eigen::VectorXd v = q, vprev = Eigen::VectorXd::Zero(N);
    double beta = 0.0;
    for (Eigen::Index j = 0; j < N; ++j) {
        V.col(j) = v;
        Eigen::VectorXd w = lamv.cwiseProduct(v) - beta * vprev;
        a(j) = v.dot(w);
        w -= a(j) * v;
        w -= V.leftCols(j + 1) * (V.leftCols(j + 1).transpose() * w);
        if (j + 1 < N) {
            beta = w.norm();
            if (!(beta > 0.0)) throw GenerationError("chain_from_spectra: Lanczos breakdown");
            b(j) = beta;
            vprev = v;
            v = w / beta;
        }
    }
    a.reverseInPlace();
    b.reverseInPlace();

    Eigen::MatrixXd J = a.asDiagonal();
    for (Eigen::Index i = 0; i + 1 < N; ++i) J(i, i + 1) = J(i + 1, i) = -b(i);
    Eigen::VectorXd e1 = Eigen::VectorXd::Zero(N);
    e1(0) = 1.0;
    const Eigen::VectorXd u = J.ldlt().solve(e1);
    if ((u.array() <= 0.0).any()) throw GenerationError("chain_from_spectra: non-physical mass vector");

    MechSystem sys;
    sys.damping_ratio = damping_ratio;
    Eigen::VectorXd m = u.array().square();
    m /= m.sum();
    sys.masses.assign(m.data(), m.data() + N);
    sys.stiffnesses.assign(n, 0.0);
    for (Eigen::Index i = 0; i + 1 < N; ++i) sys.stiffnesses[i + 1] = b(i) * std::sqrt(m(i) * m(i + 1));
    sys.stiffnesses[0] = a(0) * m(0) - sys.stiffnesses[1];
    for (double k : sys.stiffnesses)
        if (!(k > 0.0)) throw GenerationError("chain_from_spectra: non-physical stiffness");
    return sys;
}

SceneSpectra sample_scene_spectra(Rng& rng) {
    const int n = kMinDof + static_cast<int>(rng.below(kMaxDof - kMinDof + 1));
    const double slack = kResonanceHigh - kResonanceLow - (n - 1) * kMinSpacing;
    std::vector<double> u(static_cast<std::size_t>(n));
    for (auto& x : u) x = rng.uniform(0.0, slack);
    std::sort(u.begin(), u.end());
    SceneSpectra out;
    for (int i = 0; i < n; ++i) out.resonances_hz.push_back(kResonanceLow + u[i] + i * kMinSpacing);
    for (int i = 0; i + 1 < n; ++i)
        out.antiresonances_hz.push_back(
            rng.uniform(out.resonances_hz[i] + kAntiMargin, out.resonances_hz[i + 1] - kAntiMargin));
    return out;
}

TrialScene random_scene(std::uint64_t seed, const ScenePreset& preset) {
    return random_scene(seed, preset, default_noise_model());
}

TrialScene random_scene(std::uint64_t seed, const ScenePreset& preset, const NoiseModel& noise) {
    const double gain = location_gain(preset.location);
    Rng rng(derive_seed(seed, 0x5ce7e));
    for (int attempt = 0; attempt < kMaxRetries; ++attempt) {
        const SceneSpectra sp = sample_scene_spectra(rng);
        MechSystem sys;
        try {
            sys = chain_from_spectra(sp.resonances_hz, sp.antiresonances_hz, object_damping(preset.object));
            const auto w = natural_frequencies(sys);
            bool ok = w.size() == sp.resonances_hz.size();
            for (std::size_t i = 0; ok && i < w.size(); ++i)
                ok = std::abs(w[i] / kTwoPi - sp.resonances_hz[i]) < 1e-6 * sp.resonances_hz[i];
            if (!ok) continue;
        } catch (const GenerationError&) {
            continue;
        } catch (const DegenerateSystemError&) {
            continue;
        }

        TrialScene scene;
        scene.system = std::move(sys);
        const std::size_t contact = scene.system.dof_count() - 1;
        scene.contact_dof = contact;
        scene.excitation.drive_dof = contact;
        scene.wearable_gain = gain;

        const ModalBasis mb = modal_basis(scene.system);
        double peak = 0.0;
        for (std::size_t k = 0; k < scene.excitation.step_count(); ++k) {
            const double w = kTwoPi * scene.excitation.step_frequency(k);
            peak = std::max(peak, std::pow(w, 4) * std::abs(receptance(scene.system, mb, contact, contact, w)));
        }
        scene.excitation.eccentric_mass = 1.0 / peak;

        const double sigma =
            noise.sensor_sigma * posture_noise_factor(preset.posture) * object_noise_factor(preset.object);
        scene.noise_sigma_wearable = sigma;
        scene.noise_sigma_device = sigma;
        scene.motion_artifact_amplitude = noise.motion_artifact;
        scene.rng_seed = derive_seed(seed, 0x7ace);
        return scene;
    }
    throw GenerationError("random_scene: no valid system after " + std::to_string(kMaxRetries) + " draws");
}

MechSystem example_system(double damping_ratio) {
    MechSystem sys;
    sys.masses = {2.0, 1.0};
    sys.stiffnesses = {6.0, 3.0};
    sys.damping_ratio = damping_ratio;
    return sys;
}

}  // namespace tag
