#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qtherm/complex_matrix.hpp"

namespace qtherm::cli {

// One operator term of a model: either a Pauli string (characters I,X,Y,Z)
// or a dense complex matrix literal, scaled by a real coefficient.  An
// explicit site list restricts the term to those tensor factors; without one
// the term lives on the whole model space.
struct TermSpec {
    bool is_pauli = false;
    std::string pauli;
    ComplexMatrix dense;
    double coeff = 1.0;
    std::vector<std::size_t> sites;
};

struct ModelBlock {
    std::size_t sites = 1;
    std::size_t site_dim = 2;
    std::vector<TermSpec> hamiltonian;
    std::vector<TermSpec> coupling;
    double beta = 1.0;
    std::vector<double> betas;       // reservoir temperatures (openqs/ruelle/lattice)
    double lambda = 1.0;             // coupling strength
    std::vector<double> lambdas;     // van Hove sweep (weak-coupling)
    std::vector<double> modes;       // one-particle energies (fermi/weak-coupling)
    std::vector<double> form_factor; // coupling form factor f (weak-coupling)
    std::vector<double> rates;       // jump rates [down, up] (lindblad)
    std::vector<std::vector<double>> transition; // Markov matrix (instruments)
};

struct RunBlock {
    std::vector<double> times{1.0};
    std::vector<double> alphas{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    double tolerance = 1e-9;
    std::uint64_t seed = 1;
    std::size_t samples = 20;
    std::size_t length = 4; // outcome-word length (instruments)
};

struct OutputBlock {
    std::string dir = ".";
    std::string format = "csv";
};

struct ExperimentConfig {
    std::string experiment;
    ModelBlock model;
    RunBlock run;
    OutputBlock output;
};

// The 13 experiment kinds, in canonical order.
const std::vector<std::string>& experiment_names();

struct ValidationResult {
    bool ok = false;
    ExperimentConfig config;
    std::vector<std::string> errors; // "field.path: message", all at once
};

// Parses the JSON config text, fills defaults, rejects unknown keys and
// reports every schema violation at once (not first-failure).
ValidationResult try_validate(const std::string& text);

// Same, but throws ConfigError whose message joins the full issue list.
ExperimentConfig validate_config(const std::string& text);

// Normalized serialization: defaults filled, keys sorted.  Round trips
// bit-identically: serialize(validate(serialize(validate(c)))) equals
// serialize(validate(c)).
std::string serialize(const ExperimentConfig& c);

// FNV-1a hash of the normalized serialization.
std::uint64_t config_hash(const std::string& normalized);

} // namespace qtherm::cli
