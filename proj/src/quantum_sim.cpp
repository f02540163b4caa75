#include "rydgan/quantum_sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "rydgan/error.hpp"

namespace rydgan {

namespace {

constexpr double kNormTolerance = 1e-9;

bool excited(std::size_t k, int n, int q) { return (k >> (n - 1 - q)) & 1u; }

void check_spec(const HamiltonianSpec& spec) {
    const auto& arr = spec.arrangement;
    const int n = static_cast<int>(arr.size());
    if (n < 1 || n > kMaxQubits) {
        throw Error(ErrorKind::config, "atom count must be in [1, " + std::to_string(kMaxQubits) + "]");
    }
    if (arr.couplings.size() != arr.positions.size()) {
        throw Error(ErrorKind::config, "one local-detuning coupling per atom is required");
    }
    if (spec.phase != 0.0) throw Error(ErrorKind::config, "Rabi phase is fixed to 0");
    if (!(spec.c6 > 0.0)) throw Error(ErrorKind::config, "c6 must be positive");
}

// Time-independent pieces of H: interaction energy, Rydberg count, and
// summed local couplings for every basis state.
struct StaticDiagonal {
    Eigen::VectorXd interaction;
    Eigen::VectorXd excitations;
    Eigen::VectorXd coupling_sum;
};

StaticDiagonal static_diagonal(const HamiltonianSpec& spec) {
    const auto& arr = spec.arrangement;
    const int n = static_cast<int>(arr.size());
    const std::size_t dim = std::size_t{1} << n;

    std::vector<double> pair(static_cast<std::size_t>(n * n), 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            pair[i * n + j] = interaction_strength(arr.positions[i], arr.positions[j], spec.c6);
        }
    }

    StaticDiagonal d{Eigen::VectorXd::Zero(dim), Eigen::VectorXd::Zero(dim), Eigen::VectorXd::Zero(dim)};
    for (std::size_t k = 0; k < dim; ++k) {
        for (int i = 0; i < n; ++i) {
            if (!excited(k, n, i)) continue;
            d.excitations[k] += 1.0;
            d.coupling_sum[k] += arr.couplings[i];
            for (int j = i + 1; j < n; ++j) {
                if (excited(k, n, j)) d.interaction[k] += pair[i * n + j];
            }
        }
    }
    return d;
}

}  // namespace

QuantumState::QuantumState(int n_qubits, std::vector<Complex> amplitudes)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
    if (n_qubits_ < 1 || n_qubits_ > kMaxQubits) {
        throw Error(ErrorKind::config, "qubit count must be in [1, " + std::to_string(kMaxQubits) + "]");
    }
    if (amplitudes_.size() != (std::size_t{1} << n_qubits_)) {
        throw Error(ErrorKind::state, "amplitude vector length must be 2^n");
    }
    const double nrm = norm();
    if (!std::isfinite(nrm) || std::abs(nrm - 1.0) > kNormTolerance) {
        std::ostringstream msg;
        msg << "state is not normalized (norm " << nrm << ")";
        throw Error(ErrorKind::state, msg.str());
    }
}

double QuantumState::norm() const {
    double s = 0.0;
    for (const auto& a : amplitudes_) s += std::norm(a);
    return std::sqrt(s);
}

QuantumState ground_state(int n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw Error(ErrorKind::config, "qubit count must be in [1, " + std::to_string(kMaxQubits) + "]");
    }
    std::vector<Complex> amps(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
    amps[0] = 1.0;
    return QuantumState(n_qubits, std::move(amps));
}

double distance(const Coordinate& a, const Coordinate& b) { return std::hypot(a.x - b.x, a.y - b.y); }

std::vector<std::string> arrangement_violations(const AtomArrangement& arrangement, const ArrangementLimits& limits) {
    std::vector<std::string> out;
    const auto& pos = arrangement.positions;
    if (pos.empty()) out.emplace_back("arrangement has no atoms");
    if (arrangement.couplings.size() != pos.size()) out.emplace_back("coupling count differs from atom count");
    for (std::size_t i = 0; i < pos.size(); ++i) {
        const auto& p = pos[i];
        if (!(p.x >= 0.0 && p.x <= limits.field_width && p.y >= 0.0 && p.y <= limits.field_height)) {
            out.push_back("atom " + std::to_string(i) + " lies outside the field");
        }
        for (std::size_t j = i + 1; j < pos.size(); ++j) {
            if (!(distance(p, pos[j]) >= limits.min_spacing)) {
                out.push_back("atoms " + std::to_string(i) + " and " + std::to_string(j) +
                              " are closer than the minimum spacing");
            }
        }
    }
    for (std::size_t i = 0; i < arrangement.couplings.size(); ++i) {
        const double h = arrangement.couplings[i];
        if (!(h >= 0.0 && h <= 1.0)) out.push_back("coupling " + std::to_string(i) + " outside [0, 1]");
    }
    return out;
}

double interaction_strength(const Coordinate& a, const Coordinate& b, double c6) {
    const double r = distance(a, b);
    if (!(r > 0.0)) throw Error(ErrorKind::domain, "degenerate geometry: coincident atoms");
    const double r2 = r * r;
    return c6 / (r2 * r2 * r2);
}

Eigen::MatrixXcd build_hamiltonian(const HamiltonianSpec& spec, double t) {
    check_spec(spec);
    const int n = static_cast<int>(spec.arrangement.size());
    const std::size_t dim = std::size_t{1} << n;
    const auto diag = static_diagonal(spec);

    const double omega = evaluate(spec.rabi, t);
    const double local = evaluate(spec.local_detuning, t);
    const Complex up = 0.5 * omega * std::polar(1.0, spec.phase);  // <g|H|r>

    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t k = 0; k < dim; ++k) {
        h(k, k) = diag.interaction[k] - spec.global_detuning_offset * diag.excitations[k] -
                  local * diag.coupling_sum[k];
        for (int q = 0; q < n; ++q) {
            if (excited(k, n, q)) continue;
            const std::size_t flipped = k | (std::size_t{1} << (n - 1 - q));
            h(k, flipped) = up;
            h(flipped, k) = std::conj(up);
        }
    }
    return h;
}

int default_steps(double duration, int steps_per_us) {
    return std::max(1, static_cast<int>(std::ceil(duration * steps_per_us - 1e-9)));
}

QuantumState evolve(const QuantumState& initial, const HamiltonianSpec& spec, double duration, int steps) {
    check_spec(spec);
    if (steps < 1) throw Error(ErrorKind::argument, "evolve needs at least one step");
    if (!(duration >= 0.0)) throw Error(ErrorKind::argument, "duration must be nonnegative");
    const int n = static_cast<int>(spec.arrangement.size());
    if (initial.n_qubits() != n) throw Error(ErrorKind::shape, "state and arrangement sizes differ");

    const Eigen::Index dim = static_cast<Eigen::Index>(initial.dimension());
    const auto diag = static_diagonal(spec);
    const Eigen::VectorXd base = diag.interaction - spec.global_detuning_offset * diag.excitations;

    // phase == 0 makes H real symmetric; the flip pattern is fixed.
    Eigen::MatrixXd flips = Eigen::MatrixXd::Zero(dim, dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
        for (int q = 0; q < n; ++q) {
            const Eigen::Index j = k ^ (Eigen::Index{1} << (n - 1 - q));
            flips(k, j) = 0.5;
        }
    }

    Eigen::VectorXcd psi(dim);
    for (Eigen::Index k = 0; k < dim; ++k) psi[k] = initial.amplitudes()[k];

    // Steps straddling a slope jump of either pulse are split there so each
    // step only ever sees a smooth piece.
    std::vector<double> breaks;
    for (const auto* pulse : {&spec.rabi, &spec.local_detuning}) {
        for (double t : derivative_breaks(*pulse)) {
            if (t > 0.0 && t < duration) breaks.push_back(t);
        }
    }
    std::sort(breaks.begin(), breaks.end());

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dim);
    Eigen::MatrixXd h(dim, dim);
    Eigen::VectorXcd work(dim);
    auto apply = [&](double omega, double local, double dt) {
        h.noalias() = omega * flips;
        h.diagonal() = 0.5 * base - local * diag.coupling_sum;
        solver.compute(h);
        if (solver.info() != Eigen::Success) throw Error(ErrorKind::numeric, "eigendecomposition failed");
        const auto& v = solver.eigenvectors();
        const auto& lambda = solver.eigenvalues();
        work.noalias() = v.transpose() * psi;
        for (Eigen::Index i = 0; i < dim; ++i) work[i] *= std::polar(1.0, -lambda[i] * dt);
        psi.noalias() = v * work;
    };
    // Fourth-order commutator-free Magnus step: two exponentials of fixed
    // combinations of H at the Gauss nodes. Each combination has total
    // weight 1/2, hence the 0.5 * base above.
    constexpr double kNode = 0.28867513459481287;  // sqrt(3) / 6
    constexpr double kWeightLo = 0.25 - kNode;
    constexpr double kWeightHi = 0.25 + kNode;
    auto advance = [&](double a, double b) {
        const double dt = b - a;
        const double t1 = a + (0.5 - kNode) * dt;
        const double t2 = a + (0.5 + kNode) * dt;
        const double o1 = evaluate(spec.rabi, t1), o2 = evaluate(spec.rabi, t2);
        const double l1 = evaluate(spec.local_detuning, t1), l2 = evaluate(spec.local_detuning, t2);
        apply(kWeightHi * o1 + kWeightLo * o2, kWeightHi * l1 + kWeightLo * l2, dt);
        apply(kWeightLo * o1 + kWeightHi * o2, kWeightLo * l1 + kWeightHi * l2, dt);
    };

    const double dt = duration / steps;
    const double eps = 1e-12 * std::max(duration, 1.0);
    auto next_break = breaks.begin();
    for (int s = 0; s < steps; ++s) {
        double a = s * dt;
        const double b = (s + 1 == steps) ? duration : (s + 1) * dt;
        while (next_break != breaks.end() && *next_break <= b - eps) {
            if (*next_break > a + eps) {
                advance(a, *next_break);
                a = *next_break;
            }
            ++next_break;
        }
        advance(a, b);
        while (next_break != breaks.end() && *next_break <= b + eps) ++next_break;
    }

    std::vector<Complex> out(psi.data(), psi.data() + dim);
    return QuantumState(n, std::move(out));
}

std::vector<double> probabilities(const QuantumState& state) {
    std::vector<double> p;
    p.reserve(state.dimension());
    for (const auto& a : state.amplitudes()) p.push_back(std::norm(a));
    return p;
}

std::vector<std::uint64_t> sample_shots(const QuantumState& state, std::uint64_t shots, std::uint64_t rng_seed) {
    if (shots == 0) throw Error(ErrorKind::argument, "shots must be positive");
    const auto p = probabilities(state);
    std::mt19937_64 rng(rng_seed);
    std::discrete_distribution<std::size_t> pick(p.begin(), p.end());
    std::vector<std::uint64_t> counts(p.size(), 0);
    for (std::uint64_t i = 0; i < shots; ++i) ++counts[pick(rng)];
    return counts;
}

}  // namespace rydgan
