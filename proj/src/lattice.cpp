#include "qtherm/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qtherm/mat_fn.hpp"
#include "qtherm/tensor.hpp"

namespace qtherm {

namespace {

bool subset_of(const std::vector<std::size_t>& x, const std::vector<std::size_t>& y)
{
    return std::includes(y.begin(), y.end(), x.begin(), x.end());
}

bool intersects(const std::vector<std::size_t>& x, const std::vector<std::size_t>& y)
{
    for (std::size_t s : x)
        if (std::binary_search(y.begin(), y.end(), s)) return true;
    return false;
}

// positions of the (sorted) sites of `x` within the (sorted) ambient set `amb`
std::vector<std::size_t> positions_in(const std::vector<std::size_t>& x,
                                      const std::vector<std::size_t>& amb)
{
    std::vector<std::size_t> pos;
    for (std::size_t s : x) {
        const auto it = std::lower_bound(amb.begin(), amb.end(), s);
        if (it == amb.end() || *it != s)
            throw ShapeMismatch("lattice: site not contained in the ambient set");
        pos.push_back(static_cast<std::size_t>(it - amb.begin()));
    }
    return pos;
}

std::vector<std::size_t> uniform_dims(std::size_t n, std::size_t d)
{
    return std::vector<std::size_t>(n, d);
}

} // namespace

Interaction make_interaction(std::size_t n_sites, std::size_t site_dim,
                             std::vector<InteractionTerm> terms)
{
    Interaction phi;
    phi.n_sites = n_sites;
    phi.site_dim = site_dim;
    for (auto& t : terms) {
        if (t.sites.empty())
            throw ShapeMismatch("make_interaction: empty site set in a term");
        for (std::size_t i = 0; i < t.sites.size(); ++i) {
            if (t.sites[i] >= n_sites)
                throw ShapeMismatch("make_interaction: site index out of range");
            if (i > 0 && t.sites[i] <= t.sites[i - 1])
                throw ShapeMismatch("make_interaction: sites must be strictly increasing");
        }
        std::size_t want = 1;
        for (std::size_t i = 0; i < t.sites.size(); ++i) want *= site_dim;
        if (t.op.dim() != want)
            throw ShapeMismatch("make_interaction: term dimension mismatch");
        t.op = require_hermitian(t.op, "make_interaction term");
        phi.terms.push_back(std::move(t));
    }
    return phi;
}

ComplexMatrix local_hamiltonian(const Interaction& phi,
                                const std::vector<std::size_t>& lambda)
{
    if (lambda.empty()) return ComplexMatrix(1);
    std::vector<std::size_t> amb = lambda;
    std::sort(amb.begin(), amb.end());
    std::size_t dim = 1;
    for (std::size_t i = 0; i < amb.size(); ++i) {
        dim *= phi.site_dim;
        if (dim > max_tensor_dim())
            throw OverflowError("local_hamiltonian: volume exceeds tensor cap");
    }
    ComplexMatrix h(dim);
    const auto dims = uniform_dims(amb.size(), phi.site_dim);
    for (const auto& t : phi.terms)
        if (subset_of(t.sites, amb)) h += embed(t.op, dims, positions_in(t.sites, amb));
    return hermitize(h);
}

double sr_norm(const Interaction& phi, double lambda)
{
    double total = 0.0;
    std::size_t max_n = 0;
    for (const auto& t : phi.terms) max_n = std::max(max_n, t.sites.size());
    for (std::size_t n = 1; n <= max_n; ++n) {
        double sup = 0.0;
        for (std::size_t x = 0; x < phi.n_sites; ++x) {
            double s = 0.0;
            for (const auto& t : phi.terms)
                if (t.sites.size() == n &&
                    std::binary_search(t.sites.begin(), t.sites.end(), x))
                    s += op_norm_hermitian(t.op);
            sup = std::max(sup, s);
        }
        total += std::exp(lambda * static_cast<double>(n - 1)) * sup;
    }
    return total;
}

double op_norm_hermitian(const ComplexMatrix& a)
{
    const HermitianEig e = eig_hermitian(a);
    return std::max(std::abs(e.eigenvalues.front()), std::abs(e.eigenvalues.back()));
}

DerivationResult derivation(const Interaction& phi, const ComplexMatrix& a,
                            const std::vector<std::size_t>& support)
{
    std::vector<std::size_t> lam = support;
    std::sort(lam.begin(), lam.end());

    std::set<std::size_t> grown(lam.begin(), lam.end());
    for (const auto& t : phi.terms)
        if (intersects(t.sites, lam)) grown.insert(t.sites.begin(), t.sites.end());
    std::vector<std::size_t> out(grown.begin(), grown.end());

    const auto dims = uniform_dims(out.size(), phi.site_dim);
    const ComplexMatrix a_emb = embed(a, dims, positions_in(lam, out));
    ComplexMatrix r(a_emb.dim());
    for (const auto& t : phi.terms)
        if (intersects(t.sites, lam))
            r += cplx(0.0, 1.0) *
                 commutator(embed(t.op, dims, positions_in(t.sites, out)), a_emb);
    return DerivationResult{r, out};
}

DerivativeBound derivative_bound_check(const Interaction& phi, double lambda,
                                       const ComplexMatrix& a,
                                       const std::vector<std::size_t>& support, int n)
{
    // δ preserves Hermiticity, so the operator norms reduce to eigenvalues
    DerivationResult cur{require_hermitian(a, "derivative_bound_check"), support};
    std::sort(cur.support.begin(), cur.support.end());
    for (int k = 0; k < n; ++k) cur = derivation(phi, cur.op, cur.support);

    DerivativeBound r{};
    r.lhs = op_norm_hermitian(hermitize(cur.op));
    double fact = 1.0, pw = 1.0, phin = 1.0;
    const double norm_phi = sr_norm(phi, lambda);
    for (int k = 1; k <= n; ++k) {
        fact *= k;
        pw *= 2.0 / lambda;
        phin *= norm_phi;
    }
    r.bound = pw * fact * std::exp(lambda * static_cast<double>(support.size())) * phin *
              op_norm_hermitian(hermitize(a));
    r.ok = r.lhs <= r.bound * (1.0 + 1e-9);
    return r;
}

double finite_pressure(const Interaction& phi, const std::vector<std::size_t>& lambda,
                       double beta)
{
    if (lambda.empty()) throw ShapeMismatch("finite_pressure: empty volume");
    return log_partition(local_hamiltonian(phi, lambda), beta) /
           static_cast<double>(lambda.size());
}

OpenLatticeEp open_lattice_ep(const Interaction& phi, const OpenLatticePartition& part,
                              double t, const QuadratureSpec& quad)
{
    if (part.reservoirs.size() != part.betas.size())
        throw ShapeMismatch("open_lattice_ep: one beta per reservoir");

    // partition validation: disjoint cover, no term couples two reservoirs
    std::set<std::size_t> seen;
    auto add_block = [&](const std::vector<std::size_t>& block) {
        for (std::size_t s : block) {
            if (s >= phi.n_sites)
                throw DomainError("open_lattice_ep: site out of range");
            if (!seen.insert(s).second)
                throw DomainError("open_lattice_ep: partition blocks overlap");
        }
    };
    add_block(part.s);
    for (const auto& r : part.reservoirs) add_block(r);
    if (seen.size() != phi.n_sites)
        throw DomainError("open_lattice_ep: partition does not cover the lattice");
    for (const auto& term : phi.terms) {
        int touched = 0;
        for (const auto& r : part.reservoirs) {
            std::vector<std::size_t> rs = r;
            std::sort(rs.begin(), rs.end());
            if (intersects(term.sites, rs)) ++touched;
        }
        if (touched > 1)
            throw DomainError("open_lattice_ep: a term couples two reservoirs");
    }

    std::vector<std::size_t> all(phi.n_sites);
    for (std::size_t i = 0; i < phi.n_sites; ++i) all[i] = i;
    const auto dims = uniform_dims(phi.n_sites, phi.site_dim);
    const ComplexMatrix h = local_hamiltonian(phi, all);

    OpenLatticeEp result{ComplexMatrix(h.dim()), DensityMatrix(ComplexMatrix::identity(1)),
                         0.0};

    // reference state: tracial on S, free-boundary Gibbs on each reservoir
    double s_weight = 1.0;
    for (std::size_t k = 0; k < part.s.size(); ++k)
        s_weight /= static_cast<double>(phi.site_dim);
    ComplexMatrix omega = s_weight * ComplexMatrix::identity(h.dim());
    for (std::size_t j = 0; j < part.reservoirs.size(); ++j) {
        std::vector<std::size_t> rs = part.reservoirs[j];
        std::sort(rs.begin(), rs.end());
        const ComplexMatrix h_loc = local_hamiltonian(phi, rs);
        const ComplexMatrix h_emb = embed(h_loc, dims, positions_in(rs, all));
        omega = omega * embed(gibbs(h_loc, part.betas[j]).mat(), dims,
                              positions_in(rs, all));
        result.sigma += part.betas[j] * hermitize(cplx(0.0, 1.0) * commutator(h, h_emb));
    }
    result.sigma = hermitize(result.sigma);
    result.omega = DensityMatrix(hermitize(omega));

    const FiniteQDS qds(h, result.omega);
    const DensityMatrix omega_t(hermitize(evolve_state(qds, result.omega.mat(), t)));
    const double ent = relative_entropy(omega_t, result.omega).value();
    const double integral = integrate_adaptive(
        [&](double s) {
            return std::real(
                (evolve_state(qds, result.omega.mat(), s) * result.sigma).trace());
        },
        0.0, t, quad);
    result.balance_defect = std::abs(ent + integral);
    return result;
}

} // namespace qtherm
