#include "qtherm/config.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace qtherm::cli {

using nlohmann::json;

namespace {

struct Collector {
    std::vector<std::string> issues;

    void add(const std::string& path, const std::string& msg)
    {
        issues.push_back(path + ": " + msg);
    }
};

void reject_unknown(const json& obj, const std::string& path,
                    const std::vector<std::string>& allowed, Collector& c)
{
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const auto& k : allowed)
            if (it.key() == k) known = true;
        if (!known) c.add(path + "." + it.key(), "unknown key");
    }
}

bool get_number(const json& obj, const std::string& path, const std::string& key,
                double& out, Collector& c)
{
    if (!obj.contains(key)) return false;
    if (!obj[key].is_number()) {
        c.add(path + "." + key, "expected a number");
        return false;
    }
    out = obj[key].get<double>();
    return true;
}

bool get_size(const json& obj, const std::string& path, const std::string& key,
              std::size_t& out, Collector& c)
{
    if (!obj.contains(key)) return false;
    if (!obj[key].is_number_unsigned()) {
        c.add(path + "." + key, "expected a nonnegative integer");
        return false;
    }
    out = obj[key].get<std::size_t>();
    return true;
}

bool get_number_list(const json& obj, const std::string& path, const std::string& key,
                     std::vector<double>& out, Collector& c)
{
    if (!obj.contains(key)) return false;
    if (!obj[key].is_array()) {
        c.add(path + "." + key, "expected an array of numbers");
        return false;
    }
    std::vector<double> v;
    for (const auto& e : obj[key]) {
        if (!e.is_number()) {
            c.add(path + "." + key, "expected an array of numbers");
            return false;
        }
        v.push_back(e.get<double>());
    }
    out = std::move(v);
    return true;
}

bool parse_dense(const json& rows, const std::string& path, ComplexMatrix& out,
                 Collector& c)
{
    if (!rows.is_array() || rows.empty()) {
        c.add(path, "dense matrix must be a nonempty array of rows");
        return false;
    }
    const std::size_t d = rows.size();
    ComplexMatrix m(d);
    for (std::size_t i = 0; i < d; ++i) {
        const json& row = rows[i];
        if (!row.is_array() || row.size() != d) {
            c.add(path, "dense matrix must be square");
            return false;
        }
        for (std::size_t j = 0; j < d; ++j) {
            const json& e = row[j];
            if (!e.is_array() || e.size() != 2 || !e[0].is_number() ||
                !e[1].is_number()) {
                c.add(path, "each entry must be a [re, im] pair");
                return false;
            }
            m(i, j) = cplx(e[0].get<double>(), e[1].get<double>());
        }
    }
    out = std::move(m);
    return true;
}

void parse_terms(const json& obj, const std::string& path, const std::string& key,
                 std::vector<TermSpec>& out, Collector& c)
{
    if (!obj.contains(key)) return;
    if (!obj[key].is_array()) {
        c.add(path + "." + key, "expected an array of terms");
        return;
    }
    std::vector<TermSpec> terms;
    std::size_t idx = 0;
    for (const auto& t : obj[key]) {
        const std::string tp = path + "." + key + "[" + std::to_string(idx++) + "]";
        if (!t.is_object()) {
            c.add(tp, "expected a term object");
            continue;
        }
        reject_unknown(t, tp, {"pauli", "dense", "coeff", "sites"}, c);
        TermSpec spec;
        const bool has_pauli = t.contains("pauli");
        const bool has_dense = t.contains("dense");
        if (has_pauli == has_dense) {
            c.add(tp, "exactly one of \"pauli\" or \"dense\" is required");
            continue;
        }
        if (has_pauli) {
            if (!t["pauli"].is_string()) {
                c.add(tp + ".pauli", "expected a string of I,X,Y,Z");
                continue;
            }
            spec.is_pauli = true;
            spec.pauli = t["pauli"].get<std::string>();
            bool bad = spec.pauli.empty();
            for (char ch : spec.pauli)
                if (ch != 'I' && ch != 'X' && ch != 'Y' && ch != 'Z') bad = true;
            if (bad) {
                c.add(tp + ".pauli", "expected a nonempty string of I,X,Y,Z");
                continue;
            }
        } else if (!parse_dense(t["dense"], tp + ".dense", spec.dense, c)) {
            continue;
        }
        get_number(t, tp, "coeff", spec.coeff, c);
        if (t.contains("sites")) {
            if (!t["sites"].is_array()) {
                c.add(tp + ".sites", "expected an array of site indices");
                continue;
            }
            bool ok = true;
            for (const auto& s : t["sites"]) {
                if (!s.is_number_unsigned()) ok = false;
                else spec.sites.push_back(s.get<std::size_t>());
            }
            for (std::size_t i = 1; i < spec.sites.size(); ++i)
                if (spec.sites[i] <= spec.sites[i - 1]) ok = false;
            if (!ok) {
                c.add(tp + ".sites", "expected strictly increasing site indices");
                continue;
            }
        }
        out.push_back(std::move(spec));
    }
}

void check_term_shapes(const ExperimentConfig& cfg, const std::string& path,
                       const std::vector<TermSpec>& terms, Collector& c)
{
    const ModelBlock& m = cfg.model;
    std::size_t idx = 0;
    for (const auto& t : terms) {
        const std::string tp = path + "[" + std::to_string(idx++) + "]";
        const std::size_t n_sites = t.sites.empty() ? m.sites : t.sites.size();
        for (std::size_t s : t.sites)
            if (s >= m.sites) c.add(tp + ".sites", "site index out of range");
        if (t.is_pauli) {
            if (m.site_dim != 2)
                c.add(tp + ".pauli", "Pauli strings require site_dim = 2");
            else if (t.pauli.size() != n_sites)
                c.add(tp + ".pauli", "string length must match the site count");
        } else {
            std::size_t want = 1;
            for (std::size_t i = 0; i < n_sites; ++i) want *= m.site_dim;
            // mode-space experiments take dense literals at face value
            const bool mode_space =
                cfg.experiment == "fermi" || cfg.experiment == "weak-coupling";
            if (!mode_space && t.dense.dim() != want)
                c.add(tp + ".dense", "dimension must be site_dim^sites");
        }
    }
}

void check_experiment_requirements(const ExperimentConfig& cfg, Collector& c)
{
    const ModelBlock& m = cfg.model;
    const std::string& e = cfg.experiment;
    if (e == "weak-coupling") {
        if (m.modes.empty()) c.add("model.modes", "required for weak-coupling");
        if (m.form_factor.size() != m.modes.size())
            c.add("model.form_factor", "must match the number of modes");
        if (m.coupling.empty())
            c.add("model.coupling", "coupling operator required for weak-coupling");
    }
    if (e == "fermi" && m.modes.empty() && m.hamiltonian.empty())
        c.add("model.modes", "mode energies or a dense symbol are required for fermi");
    if (e == "lindblad" && m.rates.size() != 2)
        c.add("model.rates", "expected [gamma_down, gamma_up]");
    if (e == "instruments") {
        const std::size_t d = m.transition.size();
        if (d == 0) c.add("model.transition", "required for instruments");
        for (const auto& row : m.transition) {
            if (row.size() != d) {
                c.add("model.transition", "must be square");
                break;
            }
            double sum = 0.0;
            for (double q : row) {
                if (q < 0.0) c.add("model.transition", "entries must be nonnegative");
                sum += q;
            }
            if (std::abs(sum - 1.0) > 1e-12)
                c.add("model.transition", "rows must sum to 1");
        }
    }
    if ((e == "openqs-balance" || e == "ruelle" || e == "lattice") && m.betas.empty())
        c.add("model.betas", "reservoir temperatures required for " + e);
}

json term_to_json(const TermSpec& t)
{
    json j;
    if (t.is_pauli) {
        j["pauli"] = t.pauli;
    } else {
        json rows = json::array();
        for (std::size_t i = 0; i < t.dense.dim(); ++i) {
            json row = json::array();
            for (std::size_t k = 0; k < t.dense.dim(); ++k)
                row.push_back({t.dense(i, k).real(), t.dense(i, k).imag()});
            rows.push_back(row);
        }
        j["dense"] = rows;
    }
    j["coeff"] = t.coeff;
    if (!t.sites.empty()) j["sites"] = t.sites;
    return j;
}

} // namespace

const std::vector<std::string>& experiment_names()
{
    static const std::vector<std::string> names{
        "gibbs",   "kms",     "modular", "openqs-balance", "ruelle",
        "ttmep",   "bmv",     "ancilla", "lattice",        "lindblad",
        "weak-coupling", "fermi", "instruments"};
    return names;
}

ValidationResult try_validate(const std::string& text)
{
    ValidationResult r;
    Collector c;
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        c.add("(document)", e.what());
        r.errors = std::move(c.issues);
        return r;
    }
    if (!root.is_object()) {
        c.add("(document)", "top level must be an object");
        r.errors = std::move(c.issues);
        return r;
    }

    ExperimentConfig cfg;
    reject_unknown(root, "(top)", {"experiment", "model", "run", "output"}, c);

    if (!root.contains("experiment") || !root["experiment"].is_string()) {
        c.add("experiment", "required string, one of the 13 experiment kinds");
    } else {
        cfg.experiment = root["experiment"].get<std::string>();
        bool known = false;
        for (const auto& n : experiment_names())
            if (n == cfg.experiment) known = true;
        if (!known) c.add("experiment", "unknown experiment \"" + cfg.experiment + "\"");
    }

    if (root.contains("model")) {
        const json& m = root["model"];
        if (!m.is_object()) {
            c.add("model", "expected an object");
        } else {
            reject_unknown(m, "model",
                           {"sites", "site_dim", "hamiltonian", "coupling", "beta",
                            "betas", "lambda", "lambdas", "modes", "form_factor",
                            "rates", "transition"},
                           c);
            get_size(m, "model", "sites", cfg.model.sites, c);
            get_size(m, "model", "site_dim", cfg.model.site_dim, c);
            if (cfg.model.sites == 0) c.add("model.sites", "must be at least 1");
            if (cfg.model.site_dim < 2) c.add("model.site_dim", "must be at least 2");
            parse_terms(m, "model", "hamiltonian", cfg.model.hamiltonian, c);
            parse_terms(m, "model", "coupling", cfg.model.coupling, c);
            get_number(m, "model", "beta", cfg.model.beta, c);
            get_number_list(m, "model", "betas", cfg.model.betas, c);
            get_number(m, "model", "lambda", cfg.model.lambda, c);
            get_number_list(m, "model", "lambdas", cfg.model.lambdas, c);
            get_number_list(m, "model", "modes", cfg.model.modes, c);
            get_number_list(m, "model", "form_factor", cfg.model.form_factor, c);
            get_number_list(m, "model", "rates", cfg.model.rates, c);
            if (m.contains("transition")) {
                if (!m["transition"].is_array()) {
                    c.add("model.transition", "expected an array of rows");
                } else {
                    for (const auto& row : m["transition"]) {
                        std::vector<double> v;
                        if (!row.is_array()) {
                            c.add("model.transition", "expected an array of rows");
                            break;
                        }
                        bool ok = true;
                        for (const auto& x : row) {
                            if (!x.is_number()) ok = false;
                            else v.push_back(x.get<double>());
                        }
                        if (!ok) {
                            c.add("model.transition", "entries must be numbers");
                            break;
                        }
                        cfg.model.transition.push_back(std::move(v));
                    }
                }
            }
        }
    }

    if (root.contains("run")) {
        const json& rn = root["run"];
        if (!rn.is_object()) {
            c.add("run", "expected an object");
        } else {
            reject_unknown(rn, "run",
                           {"times", "alphas", "tolerance", "seed", "samples",
                            "length"},
                           c);
            get_number_list(rn, "run", "times", cfg.run.times, c);
            get_number_list(rn, "run", "alphas", cfg.run.alphas, c);
            get_number(rn, "run", "tolerance", cfg.run.tolerance, c);
            if (cfg.run.tolerance <= 0.0) c.add("run.tolerance", "must be positive");
            if (rn.contains("seed")) {
                if (!rn["seed"].is_number_unsigned())
                    c.add("run.seed", "expected a nonnegative integer");
                else cfg.run.seed = rn["seed"].get<std::uint64_t>();
            }
            get_size(rn, "run", "samples", cfg.run.samples, c);
            get_size(rn, "run", "length", cfg.run.length, c);
            if (cfg.run.times.empty()) c.add("run.times", "must not be empty");
        }
    }

    if (root.contains("output")) {
        const json& o = root["output"];
        if (!o.is_object()) {
            c.add("output", "expected an object");
        } else {
            reject_unknown(o, "output", {"dir", "format"}, c);
            if (o.contains("dir")) {
                if (!o["dir"].is_string()) c.add("output.dir", "expected a string");
                else cfg.output.dir = o["dir"].get<std::string>();
            }
            if (o.contains("format")) {
                if (!o["format"].is_string() || o["format"].get<std::string>() != "csv")
                    c.add("output.format", "only \"csv\" is supported");
                else cfg.output.format = o["format"].get<std::string>();
            }
        }
    }

    if (c.issues.empty()) {
        check_term_shapes(cfg, "model.hamiltonian", cfg.model.hamiltonian, c);
        check_term_shapes(cfg, "model.coupling", cfg.model.coupling, c);
        check_experiment_requirements(cfg, c);
    }

    if (!c.issues.empty()) {
        r.errors = std::move(c.issues);
        return r;
    }
    r.ok = true;
    r.config = std::move(cfg);
    return r;
}

ExperimentConfig validate_config(const std::string& text)
{
    ValidationResult r = try_validate(text);
    if (!r.ok) {
        std::string msg = "invalid config:";
        for (const auto& e : r.errors) msg += "\n  " + e;
        throw ConfigError(msg);
    }
    return std::move(r.config);
}

std::string serialize(const ExperimentConfig& c)
{
    json root;
    root["experiment"] = c.experiment;

    json m;
    m["sites"] = c.model.sites;
    m["site_dim"] = c.model.site_dim;
    json ham = json::array(), cpl = json::array();
    for (const auto& t : c.model.hamiltonian) ham.push_back(term_to_json(t));
    for (const auto& t : c.model.coupling) cpl.push_back(term_to_json(t));
    if (!ham.empty()) m["hamiltonian"] = ham;
    if (!cpl.empty()) m["coupling"] = cpl;
    m["beta"] = c.model.beta;
    if (!c.model.betas.empty()) m["betas"] = c.model.betas;
    m["lambda"] = c.model.lambda;
    if (!c.model.lambdas.empty()) m["lambdas"] = c.model.lambdas;
    if (!c.model.modes.empty()) m["modes"] = c.model.modes;
    if (!c.model.form_factor.empty()) m["form_factor"] = c.model.form_factor;
    if (!c.model.rates.empty()) m["rates"] = c.model.rates;
    if (!c.model.transition.empty()) m["transition"] = c.model.transition;
    root["model"] = m;

    json rn;
    rn["times"] = c.run.times;
    rn["alphas"] = c.run.alphas;
    rn["tolerance"] = c.run.tolerance;
    rn["seed"] = c.run.seed;
    rn["samples"] = c.run.samples;
    rn["length"] = c.run.length;
    root["run"] = rn;

    json o;
    o["dir"] = c.output.dir;
    o["format"] = c.output.format;
    root["output"] = o;

    return root.dump(2) + "\n"; // keys sorted by nlohmann's ordered map
}

std::uint64_t config_hash(const std::string& normalized)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : normalized) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace qtherm::cli
