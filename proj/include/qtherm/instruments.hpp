#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qtherm/extreal.hpp"
#include "qtherm/lindblad.hpp"
#include "qtherm/qstate.hpp"

namespace qtherm {

// Repeated-measurement instrument: one completely positive Heisenberg-picture
// map J_a per outcome label, with Φ = Σ_a J_a unital.
struct Instrument {
    std::vector<std::string> labels;
    std::vector<Superoperator> j_ops;

    std::size_t alphabet() const { return labels.size(); }
    std::size_t dim() const { return j_ops.empty() ? 0 : j_ops.front().dim; }
    Superoperator phi() const;          // Σ J_a, Heisenberg
    Superoperator phi_schroedinger() const; // adjoint of Φ
};

// Validates complete positivity of each J_a (Choi) and unitality of the sum;
// DomainError / ShapeMismatch on failure.
Instrument make_instrument(std::vector<std::string> labels,
                           std::vector<Superoperator> j_ops);

// Dense law of the first n outcomes.  Words ω₁…ω_n are indexed with ω₁ most
// significant: index = Σ_k ω_k · A^{n−k}.
struct PathLaw {
    std::size_t n = 0;
    std::size_t alphabet = 0;
    std::vector<double> p;

    double prob(const std::vector<std::size_t>& word) const;
    // marginal over the last (keep_front) or first (keep_back) symbol
    PathLaw marginal_front() const;
    PathLaw marginal_back() const;
};

// P_n(ω₁,…,ω_n) = tr(ρ J_{ω₁}∘⋯∘J_{ω_n}(1)); requires a Φ-invariant state
// (NotInvariant beyond ‖Φ_#(ρ)−ρ‖₁ = 1e−9) so the law is shift invariant.
// OverflowError past 10⁶ table entries.
PathLaw path_law(const Instrument& inst, const DensityMatrix& rho, std::size_t n);

// Outcome-reversed law P̂_n(ω₁,…,ω_n) = P_n(θ(ω_n),…,θ(ω₁)) for an alphabet
// involution θ; DomainError unless θ∘θ = id.
PathLaw reversed_law(const PathLaw& law, const std::vector<std::size_t>& theta);

// Entropy production of the first n outcomes: the classical Kullback–Leibler
// divergence Σ P log(P/P̂) ≥ 0.  Note the orientation: this is the NONNEGATIVE
// classical divergence, opposite in sign to the quantum relative_entropy
// convention used elsewhere in the library.  Tagged +∞ when P charges a word
// that P̂ does not.
ExtReal ep_n(const PathLaw& law, const std::vector<std::size_t>& theta);

// Upper decoupling scan: smallest C with P(A ∩ φ^{−n}B) ≤ C·P(A)P(B) over
// single-word cylinders A ∈ ℱ_n, B ∈ ℱ_m, n + m ≤ n_max (additivity makes
// word cylinders sufficient); `violations` counts pairs exceeding candidate_c.
struct DecouplingReport {
    double best_c;
    std::size_t violations;
};

DecouplingReport upper_decoupling_check(const Instrument& inst, const DensityMatrix& rho,
                                        std::size_t n_max, double candidate_c);

// Fixed point of Φ_#: power iteration warm start refined through the
// invariant_state null-space solver.
DensityMatrix phi_invariant_state(const Instrument& inst);

// Sequential trajectory sampler: outcome k has conditional probability
// tr(J_k#(ρ_path)) and updates ρ_path ← J_k#(ρ_path)/p.  Deterministic for a
// fixed seed.
std::vector<std::vector<std::size_t>> sample_paths(const Instrument& inst,
                                                   const DensityMatrix& rho,
                                                   std::size_t n, std::size_t n_paths,
                                                   std::uint64_t seed);

// Monte-Carlo estimate of ep_n from sampled trajectories with a bootstrap
// standard error (resampled with the same generator stream).
struct BootstrapEstimate {
    double mean;
    double std_error;
};

BootstrapEstimate empirical_ep(const std::vector<std::vector<std::size_t>>& paths,
                               const PathLaw& law, const std::vector<std::size_t>& theta,
                               std::size_t n_boot, std::uint64_t seed);

} // namespace qtherm
