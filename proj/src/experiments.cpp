#include "qtherm/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "json.hpp"
#include "qtherm/epstats.hpp"
#include "qtherm/fermi.hpp"
#include "qtherm/instruments.hpp"
#include "qtherm/lattice.hpp"
#include "qtherm/lindblad.hpp"
#include "qtherm/mat_fn.hpp"
#include "qtherm/modular.hpp"
#include "qtherm/openqs.hpp"
#include "qtherm/tensor.hpp"

namespace qtherm::cli {

namespace {

constexpr const char* kVersion = "qtherm 0.1.0";

ComplexMatrix random_hermitian(std::mt19937_64& rng, std::size_t d)
{
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix m(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) m(i, j) = cplx(g(rng), g(rng));
    return hermitize(m);
}

DensityMatrix random_state(std::mt19937_64& rng, std::size_t d)
{
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix m(d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) m(i, j) = cplx(g(rng), g(rng));
    ComplexMatrix rho = m * m.adjoint();
    return DensityMatrix((1.0 / rho.trace().real()) * rho);
}

// term as a local operator on its own site set (tensor-ordered)
ComplexMatrix term_local(const TermSpec& t)
{
    if (t.is_pauli) return t.coeff * pauli_string(t.pauli);
    return t.coeff * t.dense;
}

std::size_t full_dim(const ModelBlock& m)
{
    std::size_t d = 1;
    for (std::size_t i = 0; i < m.sites; ++i) d *= m.site_dim;
    return d;
}

// sum of terms embedded into the whole model space
ComplexMatrix build_operator(const ModelBlock& m, const std::vector<TermSpec>& terms)
{
    ComplexMatrix h(full_dim(m));
    const std::vector<std::size_t> dims(m.sites, m.site_dim);
    for (const auto& t : terms) {
        if (t.sites.empty()) h += term_local(t);
        else h += embed(term_local(t), dims, t.sites);
    }
    return h;
}

// sum of terms supported exactly on `sites`, as a local operator
ComplexMatrix collect_local(const std::vector<TermSpec>& terms,
                            const std::vector<std::size_t>& sites, std::size_t dim)
{
    ComplexMatrix op(dim);
    for (const auto& t : terms)
        if (t.sites == sites) op += term_local(t);
    return op;
}

OpenSystem build_from_model(const ModelBlock& m)
{
    if (m.sites < 2)
        throw ConfigError("open-system experiments need at least two sites");
    if (m.betas.size() != m.sites - 1)
        throw ConfigError("model.betas must list one temperature per reservoir");
    const ComplexMatrix h_sys =
        collect_local(m.hamiltonian, {0}, m.site_dim);
    std::vector<ReservoirSpec> reservoirs;
    std::vector<ComplexMatrix> couplings;
    for (std::size_t j = 1; j < m.sites; ++j) {
        ReservoirSpec r;
        r.label = "R" + std::to_string(j);
        r.h = collect_local(m.hamiltonian, {j}, m.site_dim);
        r.beta = m.betas[j - 1];
        reservoirs.push_back(std::move(r));
        couplings.push_back(m.lambda *
                            collect_local(m.coupling, {0, j}, m.site_dim * m.site_dim));
    }
    return build_open_system(h_sys, reservoirs, couplings);
}

// perturbed dynamics with the unperturbed Gibbs reference state
FiniteQDS quench_system(const ModelBlock& m)
{
    const ComplexMatrix h0 = build_operator(m, m.hamiltonian);
    const ComplexMatrix v = build_operator(m, m.coupling);
    return FiniteQDS(h0 + m.lambda * v, gibbs(h0, m.beta));
}

Table make_table(std::vector<std::string> cols, std::vector<std::string> units)
{
    Table t;
    t.columns = std::move(cols);
    t.units = std::move(units);
    return t;
}

// ---------------------------------------------------------------- drivers

void run_gibbs(const ExperimentConfig& cfg, ResultSet& out)
{
    const GibbsSpec spec{build_operator(cfg.model, cfg.model.hamiltonian),
                         cfg.model.beta};
    std::mt19937_64 rng(cfg.run.seed);
    Table t = make_table({"index", "gap"}, {"1", "1"});
    double min_gap = 1e300;
    const std::size_t n = cfg.run.samples ? cfg.run.samples : 20;
    for (std::size_t i = 0; i < n; ++i) {
        const VariationalCheck v =
            gibbs_variational_check(spec, random_state(rng, spec.H.dim()));
        min_gap = std::min(min_gap, v.gap);
        t.rows.push_back({static_cast<double>(i), v.gap});
    }
    const VariationalCheck at_gibbs = gibbs_variational_check(spec, gibbs(spec));
    out.tables["variational"] = std::move(t);
    out.diagnostics["pressure"] = at_gibbs.pressure;
    out.diagnostics["min_gap"] = min_gap;
    out.diagnostics["gibbs_gap_defect"] = std::abs(at_gibbs.gap);
}

void run_kms(const ExperimentConfig& cfg, ResultSet& out)
{
    const ComplexMatrix h = build_operator(cfg.model, cfg.model.hamiltonian);
    const FiniteQDS sys(h, gibbs(h, cfg.model.beta));
    std::mt19937_64 rng(cfg.run.seed);
    Table t = make_table({"pair", "defect"}, {"1", "1"});
    double max_defect = 0.0;
    const std::size_t n = cfg.run.samples ? cfg.run.samples : 20;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = kms_check(sys, cfg.model.beta, random_hermitian(rng, h.dim()),
                                   random_hermitian(rng, h.dim()), cfg.run.times);
        max_defect = std::max(max_defect, d);
        t.rows.push_back({static_cast<double>(i), d});
    }
    out.tables["kms"] = std::move(t);
    out.diagnostics["kms_defect"] = max_defect;
}

void run_modular(const ExperimentConfig& cfg, ResultSet& out)
{
    const ComplexMatrix h = build_operator(cfg.model, cfg.model.hamiltonian);
    const ComplexMatrix v = cfg.model.lambda * build_operator(cfg.model, cfg.model.coupling);
    const double beta = cfg.model.beta;
    const DensityMatrix omega = gibbs(h, beta);
    const DensityMatrix nu = gibbs(h + v, beta);
    const DensityMatrix mixed(
        (1.0 / static_cast<double>(h.dim())) * ComplexMatrix::identity(h.dim()));

    Table t = make_table({"t", "chain_defect", "cocycle_defect", "intertwine_defect"},
                         {"time", "1", "1", "1"});
    double worst = 0.0;
    std::mt19937_64 rng(cfg.run.seed);
    const ComplexMatrix probe = random_hermitian(rng, h.dim());
    for (double s : cfg.run.times) {
        const double chain =
            (connes_cocycle(nu, mixed, s) -
             connes_cocycle(nu, omega, s) * connes_cocycle(omega, mixed, s))
                .max_abs();
        const double group =
            (connes_cocycle(nu, omega, 2.0 * s) -
             connes_cocycle(nu, omega, s) *
                 modular_flow(omega, connes_cocycle(nu, omega, s), s))
                .max_abs();
        const double inter =
            (connes_cocycle(nu, omega, s) * modular_flow(omega, probe, s) -
             modular_flow(nu, probe, s) * connes_cocycle(nu, omega, s))
                .max_abs();
        worst = std::max({worst, chain, group, inter});
        t.rows.push_back({s, chain, group, inter});
    }
    out.tables["cocycle"] = std::move(t);
    out.diagnostics["cocycle_defect"] = worst;

    const FiniteQDS free_sys(h, omega);
    out.diagnostics["araki_defect"] = trace_norm_hermitian(
        araki_perturbation(free_sys, v, beta).mat() - gibbs(h + v, beta).mat());

    const FiniteQDS full_sys(h + v, omega);
    const StandardRep rep = build_standard_rep(omega);
    const cvector k_omega = c_liouvillean(full_sys, v) * rep.omega_vec;
    out.diagnostics["c_liouvillean_defect"] = vec_norm(k_omega);
}

void run_openqs_balance(const ExperimentConfig& cfg, ResultSet& out)
{
    const OpenSystem sys = build_from_model(cfg.model);
    Table t = make_table({"t", "ent", "integral", "defect"}, {"time", "1", "1", "1"});
    double worst = 0.0;
    for (double s : cfg.run.times) {
        const EntropyBalanceReport r = entropy_balance(sys, s);
        worst = std::max(worst, r.defect);
        t.rows.push_back({s, r.ent, r.integral, r.defect});
    }
    out.tables["balance"] = std::move(t);
    out.diagnostics["balance_defect"] = worst;
    out.diagnostics["ness_ep"] = ness_entropy_production(sys);
}

void run_ruelle(const ExperimentConfig& cfg, ResultSet& out)
{
    const OpenSystem sys = build_from_model(cfg.model);
    Table t = make_table({"t", "total", "delta_s", "delta_sigma", "defect"},
                         {"time", "1", "1", "1", "1"});
    double worst = 0.0;
    for (double s : cfg.run.times) {
        const RuelleReport r = ruelle_decomposition(sys, s);
        worst = std::max(worst, r.defect);
        t.rows.push_back({s, r.total, r.delta_s, r.delta_sigma, r.defect});
    }
    out.tables["ruelle"] = std::move(t);
    out.diagnostics["ruelle_defect"] = worst;
}

void run_ttmep(const ExperimentConfig& cfg, ResultSet& out)
{
    const FiniteQDS sys = quench_system(cfg.model);
    const double time = cfg.run.times.front();
    const OutcomeMeasure q = ttmep_law(sys, time);

    Table t = make_table({"s", "p"}, {"1", "1"});
    for (const Atom& a : q.atoms) t.rows.push_back({a.s, a.p});
    out.tables["law"] = std::move(t);

    const ComplexMatrix omega_t = evolve_state(sys, sys.omega.mat(), time);
    const ExtReal ent = relative_entropy(DensityMatrix(omega_t), sys.omega);
    out.diagnostics["mean"] = q.mean();
    out.diagnostics["mean_defect"] =
        ent.is_finite() ? std::abs(q.mean() + ent.value()) : 1e300;

    double laplace = 0.0;
    for (double a : cfg.run.alphas)
        laplace = std::max(laplace,
                           std::abs(q.laplace(a) - ttmep_charfn(sys, time, a)));
    out.diagnostics["laplace_defect"] = laplace;

    try {
        const FluctuationReport fr = fluctuation_relation_check(
            sys, TimeReversal(ComplexMatrix::identity(sys.omega.dim())), time);
        out.diagnostics["symmetry_defect"] =
            std::max(fr.max_defect_measure, fr.max_defect_charfn);
    } catch (const NotTRI&) {
        out.diagnostics["tri"] = 0.0; // model not time-reversal invariant
    }
}

void run_bmv(const ExperimentConfig& cfg, ResultSet& out)
{
    const FiniteQDS sys = quench_system(cfg.model);
    const double time = cfg.run.times.front();
    const std::vector<BmvTtmepRow> rows = bmv_vs_ttmep(sys, time, cfg.run.alphas);

    Table t = make_table({"alpha", "f_ttm", "f_bmv", "gap"}, {"1", "1", "1", "1"});
    for (const auto& r : rows)
        t.rows.push_back({r.alpha, r.f_ttm.real(), r.f_bmv.real(),
                          std::abs(r.f_bmv - r.f_ttm)});
    out.tables["charfn"] = std::move(t);

    out.diagnostics["endpoint_defect"] =
        std::abs(bmv_charfn(sys, time, 0.0) - 1.0);
    const ComplexMatrix omega_t = evolve_state(sys, sys.omega.mat(), time);
    const ExtReal ent = relative_entropy(DensityMatrix(omega_t), sys.omega);
    const double h = 1e-4;
    const cplx deriv =
        (bmv_charfn(sys, time, h) - bmv_charfn(sys, time, -h)) / (2.0 * h);
    out.diagnostics["derivative"] = deriv.real();
    if (ent.is_finite())
        out.diagnostics["derivative_gap"] = std::abs(deriv.real() - ent.value());
    double sym = 0.0;
    for (double a : cfg.run.alphas)
        sym = std::max(sym, std::abs(bmv_charfn(sys, time, a) -
                                     bmv_charfn(sys, time, 1.0 - a)));
    out.diagnostics["symmetry_defect"] = sym;
}

void run_ancilla(const ExperimentConfig& cfg, ResultSet& out)
{
    const FiniteQDS sys = quench_system(cfg.model);
    ComplexMatrix probe(2);
    probe(0, 0) = probe(1, 1) = 0.5;
    probe(0, 1) = probe(1, 0) = 0.4;
    const DensityMatrix rho_a(probe);

    Table t = make_table({"t", "alpha_im", "direct_re", "direct_im", "probe_re",
                          "probe_im", "defect"},
                         {"time", "1", "1", "1", "1", "1", "1"});
    double worst = 0.0;
    for (double time : cfg.run.times)
        for (double a : cfg.run.alphas) {
            const cplx alpha(0.0, a);
            const cplx direct = ttmep_charfn(sys, time, alpha);
            const cplx tomo = ancilla_tomography(sys, rho_a, time, alpha);
            const double d = std::abs(direct - tomo);
            worst = std::max(worst, d);
            t.rows.push_back({time, a, direct.real(), direct.imag(), tomo.real(),
                              tomo.imag(), d});
        }
    out.tables["tomography"] = std::move(t);
    out.diagnostics["tomography_defect"] = worst;
}

void run_lattice(const ExperimentConfig& cfg, ResultSet& out)
{
    const ModelBlock& m = cfg.model;
    std::vector<InteractionTerm> terms;
    for (const auto& t : m.hamiltonian) {
        InteractionTerm it;
        it.sites = t.sites;
        if (it.sites.empty())
            for (std::size_t s = 0; s < m.sites; ++s) it.sites.push_back(s);
        it.op = term_local(t);
        terms.push_back(std::move(it));
    }
    const Interaction phi = make_interaction(m.sites, m.site_dim, std::move(terms));

    // system = site 0, remaining sites split contiguously over the reservoirs
    OpenLatticePartition part;
    part.s = {0};
    part.betas = m.betas;
    const std::size_t n_res = m.betas.size();
    const std::size_t rest = m.sites - 1;
    std::size_t next = 1;
    for (std::size_t j = 0; j < n_res; ++j) {
        const std::size_t take = rest / n_res + (j < rest % n_res ? 1 : 0);
        std::vector<std::size_t> block;
        for (std::size_t k = 0; k < take; ++k) block.push_back(next++);
        part.reservoirs.push_back(std::move(block));
    }

    Table t = make_table({"t", "balance_defect"}, {"time", "1"});
    double worst = 0.0;
    for (double s : cfg.run.times) {
        const OpenLatticeEp ep = open_lattice_ep(phi, part, s);
        worst = std::max(worst, ep.balance_defect);
        t.rows.push_back({s, ep.balance_defect});
    }
    out.tables["balance"] = std::move(t);
    out.diagnostics["balance_defect"] = worst;
    out.diagnostics["sr_norm"] = sr_norm(phi, 1.0);

    if (!phi.terms.empty()) {
        double ok = 1.0;
        for (int n = 1; n <= 2; ++n) {
            const DerivativeBound b = derivative_bound_check(
                phi, 1.0, phi.terms.front().op, phi.terms.front().sites, n);
            if (!b.ok) ok = 0.0;
        }
        out.diagnostics["derivative_bound_ok"] = ok;
    }
}

void run_lindblad(const ExperimentConfig& cfg, ResultSet& out)
{
    const ComplexMatrix ups = build_operator(cfg.model, cfg.model.hamiltonian);
    if (ups.dim() != 2)
        throw ConfigError("the lindblad experiment models a single qubit");
    ComplexMatrix lower(2);
    lower(1, 0) = 1.0;
    LindbladGen gen;
    gen.upsilon = ups;
    gen.jump_ops.push_back(std::sqrt(cfg.model.rates[0]) * lower);
    gen.jump_ops.push_back(std::sqrt(cfg.model.rates[1]) * lower.adjoint());

    const Superoperator ms = lindblad_to_super(gen, Picture::schroedinger);
    Table t = make_table({"t", "choi_min_eig"}, {"time", "1"});
    double min_eig = 0.0;
    for (double s : cfg.run.times) {
        Superoperator e_tm = ms;
        e_tm.mat = expm(s * ms.mat);
        const CpReport cp = cp_check(e_tm);
        min_eig = std::min(min_eig, cp.choi_min_eig);
        t.rows.push_back({s, cp.choi_min_eig});
    }
    out.tables["choi"] = std::move(t);
    out.diagnostics["choi_defect"] = std::max(0.0, -min_eig);

    const DensityMatrix omega = gibbs(ups, cfg.model.beta);
    const DetailedBalanceReport db = detailed_balance_check(gen, omega);
    out.diagnostics["invariance_defect"] = db.invariance_defect;
    out.diagnostics["dbc_defect"] = db.dbc_defect;
    out.diagnostics["dbc1_defect"] = db.dbc1_defect;
    const DensityMatrix inv = invariant_state(ms);
    out.diagnostics["invariant_residual_defect"] = ms.apply(inv.mat()).frob_norm();
}

void run_weak_coupling(const ExperimentConfig& cfg, ResultSet& out)
{
    WeakCouplingModel model;
    model.k_sys = build_operator(cfg.model, cfg.model.hamiltonian);
    model.q_sys = build_operator(cfg.model, cfg.model.coupling);
    model.h_modes = ComplexMatrix::diag(cfg.model.modes);
    for (double f : cfg.model.form_factor) model.f.push_back(cplx(f, 0.0));
    model.beta = cfg.model.beta;
    const std::vector<double> lambdas =
        cfg.model.lambdas.empty() ? std::vector<double>{0.4, 0.2, 0.1}
                                  : cfg.model.lambdas;

    const auto rows = weak_coupling_extract(model, lambdas, cfg.run.times.front());
    Table t = make_table({"lambda", "cauchy_diff", "dbc_defect", "commutant_defect"},
                         {"1", "1", "1", "1"});
    for (const auto& r : rows)
        t.rows.push_back({r.lambda, r.cauchy_diff, r.dbc_defect, r.commutant_defect});
    out.tables["sweep"] = std::move(t);
    out.diagnostics["final_dbc"] = rows.back().dbc_defect;
    out.diagnostics["final_cauchy"] = rows.back().cauchy_diff;
}

void run_fermi(const ExperimentConfig& cfg, ResultSet& out)
{
    ComplexMatrix h;
    if (!cfg.model.modes.empty()) h = ComplexMatrix::diag(cfg.model.modes);
    else h = build_operator(cfg.model, cfg.model.hamiltonian); // mode space
    const double beta = cfg.model.beta;
    const ComplexMatrix symbol =
        mat_fn(h, [beta](double x) { return 1.0 / (1.0 + std::exp(beta * x)); });

    const FermionAlgebra alg = jordan_wigner(h.dim());
    const QuasiFreeState state = quasi_free_state(alg, symbol);

    std::mt19937_64 rng(cfg.run.seed);
    Table t = make_table({"index", "defect"}, {"1", "1"});
    double worst = 0.0;
    const std::size_t n = cfg.run.samples ? cfg.run.samples : 20;
    for (std::size_t i = 0; i < n; ++i) {
        const ComplexMatrix u = mat_fn(random_hermitian(rng, h.dim()),
                                       [](double x) { return std::exp(cplx(0.0, x)); });
        const double d = std::abs(characteristic_fn(state, u) -
                                  characteristic_fn_trace(alg, state, u));
        worst = std::max(worst, d);
        t.rows.push_back({static_cast<double>(i), d});
    }
    out.tables["charfn"] = std::move(t);
    out.diagnostics["determinant_defect"] = worst;

    // the Fermi–Dirac symbol is the β-KMS state of the second quantization
    const FiniteQDS sys(alg.d_gamma(h), state.rho);
    const ComplexMatrix a = random_hermitian(rng, alg.fock_dim());
    const ComplexMatrix b = random_hermitian(rng, alg.fock_dim());
    out.diagnostics["kms_defect"] =
        kms_check(sys, beta, (1.0 / a.frob_norm()) * a, (1.0 / b.frob_norm()) * b,
                  cfg.run.times);
}

Instrument markov_instrument(const std::vector<std::vector<double>>& q)
{
    const std::size_t d = q.size();
    std::vector<std::string> labels;
    std::vector<Superoperator> ops;
    for (std::size_t a = 0; a < d; ++a) {
        Superoperator s;
        s.dim = d;
        s.picture = Picture::heisenberg;
        s.mat = ComplexMatrix(d * d);
        for (std::size_t i = 0; i < d; ++i) {
            ComplexMatrix k(d);
            k(a, i) = std::sqrt(q[i][a]);
            s.mat += left_mult(k.adjoint()) * right_mult(k);
        }
        labels.push_back(std::to_string(a));
        ops.push_back(std::move(s));
    }
    return make_instrument(std::move(labels), std::move(ops));
}

void run_instruments(const ExperimentConfig& cfg, ResultSet& out)
{
    const Instrument inst = markov_instrument(cfg.model.transition);
    const DensityMatrix rho = phi_invariant_state(inst);
    const std::vector<std::size_t> theta = [&] {
        std::vector<std::size_t> id(inst.alphabet());
        for (std::size_t i = 0; i < id.size(); ++i) id[i] = i;
        return id;
    }();

    Table t = make_table({"n", "ep"}, {"1", "1"});
    const std::size_t n_max = std::max<std::size_t>(cfg.run.length, 2);
    for (std::size_t n = 2; n <= n_max; ++n) {
        const ExtReal e = ep_n(path_law(inst, rho, n), theta);
        t.rows.push_back({static_cast<double>(n),
                          e.is_finite() ? e.value() : 1e300});
    }
    out.tables["ep"] = std::move(t);

    if (cfg.run.samples > 0) {
        const auto paths =
            sample_paths(inst, rho, n_max, cfg.run.samples, cfg.run.seed);
        const PathLaw law = path_law(inst, rho, n_max);
        const ExtReal exact = ep_n(law, theta);
        const BootstrapEstimate est =
            empirical_ep(paths, law, theta, 200, cfg.run.seed + 1);
        out.diagnostics["empirical_ep"] = est.mean;
        out.diagnostics["std_error"] = est.std_error;
        if (exact.is_finite()) out.diagnostics["exact_ep"] = exact.value();
    }
    const DecouplingReport ud = upper_decoupling_check(inst, rho, n_max, 1e300);
    out.diagnostics["ud_constant"] = ud.best_c;
}

} // namespace

ResultSet run_experiment(const ExperimentConfig& cfg)
{
    ResultSet out;
    out.experiment = cfg.experiment;
    out.config_normalized = serialize(cfg);
    out.hash = config_hash(out.config_normalized);
    out.version = kVersion;

    try {
        if (cfg.experiment == "gibbs") run_gibbs(cfg, out);
        else if (cfg.experiment == "kms") run_kms(cfg, out);
        else if (cfg.experiment == "modular") run_modular(cfg, out);
        else if (cfg.experiment == "openqs-balance") run_openqs_balance(cfg, out);
        else if (cfg.experiment == "ruelle") run_ruelle(cfg, out);
        else if (cfg.experiment == "ttmep") run_ttmep(cfg, out);
        else if (cfg.experiment == "bmv") run_bmv(cfg, out);
        else if (cfg.experiment == "ancilla") run_ancilla(cfg, out);
        else if (cfg.experiment == "lattice") run_lattice(cfg, out);
        else if (cfg.experiment == "lindblad") run_lindblad(cfg, out);
        else if (cfg.experiment == "weak-coupling") run_weak_coupling(cfg, out);
        else if (cfg.experiment == "fermi") run_fermi(cfg, out);
        else if (cfg.experiment == "instruments") run_instruments(cfg, out);
        else throw ConfigError("unknown experiment \"" + cfg.experiment + "\"");
    } catch (const ConfigError&) {
        throw;
    } catch (const OverflowError& e) {
        throw OverflowError("experiment " + cfg.experiment + ": " + e.what());
    } catch (const QthermError& e) {
        throw QthermError("experiment " + cfg.experiment + ": " + e.what());
    }
    return out;
}

std::string experiment_blurb(const std::string& name)
{
    if (name == "gibbs") return "Gibbs variational principle over random states";
    if (name == "kms") return "KMS boundary-condition defect of the thermal state";
    if (name == "modular") return "Connes cocycle identities and Araki perturbation";
    if (name == "openqs-balance") return "entropy balance of a coupled open system";
    if (name == "ruelle") return "entropy production split into ΔS and ΔΣ parts";
    if (name == "ttmep") return "two-time measurement entropy production statistics";
    if (name == "bmv") return "tr exp(log ω − α c^t) versus the two-time law";
    if (name == "ancilla") return "probe-qubit interferometric tomography of 𝔉(iν)";
    if (name == "lattice") return "finite-volume spin-chain entropy balance and bounds";
    if (name == "lindblad") return "thermal qubit semigroup: CP, detailed balance";
    if (name == "weak-coupling") return "van Hove extraction of the reduced generator";
    if (name == "fermi") return "quasi-free fermion determinant and KMS identities";
    if (name == "instruments") return "repeated-measurement outcome laws and their ep";
    return "";
}

namespace {

std::string csv_escape(const std::string& s)
{
    bool need = false;
    for (char c : s)
        if (c == ',' || c == '"' || c == '\n') need = true;
    if (!need) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

void atomic_write(const std::filesystem::path& path, const std::string& content)
{
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw ConfigError("cannot write " + tmp.string());
        f << content;
    }
    std::filesystem::rename(tmp, path);
}

std::string format_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

std::vector<std::string> write_outputs(const ResultSet& r, const std::string& dir)
{
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    std::vector<std::string> written;

    for (const auto& [name, table] : r.tables) {
        std::string csv;
        for (std::size_t i = 0; i < table.columns.size(); ++i) {
            if (i) csv += ',';
            csv += csv_escape(table.columns[i] + " (" + table.units[i] + ")");
        }
        csv += '\n';
        for (const auto& row : table.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) csv += ',';
                csv += format_double(row[i]);
            }
            csv += '\n';
        }
        const fs::path path = fs::path(dir) / (r.experiment + "_" + name + ".csv");
        atomic_write(path, csv);
        written.push_back(path.string());
    }

    nlohmann::json meta;
    meta["experiment"] = r.experiment;
    meta["config_hash"] = r.hash;
    meta["version"] = r.version;
    meta["config"] = nlohmann::json::parse(r.config_normalized);
    for (const auto& [k, v] : r.diagnostics) meta["diagnostics"][k] = v;
    for (const auto& [name, table] : r.tables)
        meta["tables"][name] = {{"rows", table.rows.size()},
                                {"columns", table.columns}};
    const fs::path side = fs::path(dir) / (r.experiment + ".json");
    atomic_write(side, meta.dump(2) + "\n");
    written.push_back(side.string());
    return written;
}

double worst_defect(const ResultSet& r)
{
    double worst = 0.0;
    for (const auto& [k, v] : r.diagnostics)
        if (k.size() >= 7 && k.compare(k.size() - 7, 7, "_defect") == 0)
            worst = std::max(worst, v);
    return worst;
}

} // namespace qtherm::cli
