#include "qtherm/instruments.hpp"

#include <cmath>

#include "qtherm/tensor.hpp"

namespace qtherm {

namespace {

void require_involution(const std::vector<std::size_t>& theta, std::size_t alphabet)
{
    if (theta.size() != alphabet)
        throw ShapeMismatch("alphabet involution: size mismatch");
    for (std::size_t a = 0; a < alphabet; ++a) {
        if (theta[a] >= alphabet || theta[theta[a]] != a)
            throw DomainError("alphabet involution: theta is not an involution");
    }
}

} // namespace

Superoperator Instrument::phi() const
{
    Superoperator s;
    s.dim = dim();
    s.picture = Picture::heisenberg;
    s.mat = ComplexMatrix(s.dim * s.dim);
    for (const auto& j : j_ops) s.mat += j.mat;
    return s;
}

Superoperator Instrument::phi_schroedinger() const
{
    Superoperator s = phi();
    s.mat = s.mat.adjoint();
    s.picture = Picture::schroedinger;
    return s;
}

Instrument make_instrument(std::vector<std::string> labels,
                           std::vector<Superoperator> j_ops)
{
    if (labels.empty() || labels.size() != j_ops.size())
        throw ShapeMismatch("make_instrument: one CP map per label");
    const std::size_t d = j_ops.front().dim;
    for (auto& j : j_ops) {
        if (j.dim != d) throw ShapeMismatch("make_instrument: dimension mismatch");
        j.picture = Picture::heisenberg;
        const CpReport cp = cp_check(j);
        if (cp.choi_min_eig < -1e-10)
            throw DomainError("make_instrument: outcome map is not completely positive");
    }
    Instrument inst{std::move(labels), std::move(j_ops)};
    const ComplexMatrix one = ComplexMatrix::identity(d);
    if ((inst.phi().apply(one) - one).frob_norm() > 1e-11)
        throw DomainError("make_instrument: total map is not unital");
    return inst;
}

double PathLaw::prob(const std::vector<std::size_t>& word) const
{
    if (word.size() != n) throw ShapeMismatch("PathLaw::prob: wrong word length");
    std::size_t idx = 0;
    for (std::size_t w : word) {
        if (w >= alphabet) throw ShapeMismatch("PathLaw::prob: symbol out of range");
        idx = idx * alphabet + w;
    }
    return p[idx];
}

PathLaw PathLaw::marginal_front() const
{
    if (n == 0) throw DomainError("PathLaw::marginal_front: empty law");
    PathLaw out{n - 1, alphabet, std::vector<double>(p.size() / alphabet, 0.0)};
    for (std::size_t i = 0; i < p.size(); ++i) out.p[i / alphabet] += p[i];
    return out;
}

PathLaw PathLaw::marginal_back() const
{
    if (n == 0) throw DomainError("PathLaw::marginal_back: empty law");
    const std::size_t block = p.size() / alphabet;
    PathLaw out{n - 1, alphabet, std::vector<double>(block, 0.0)};
    for (std::size_t i = 0; i < p.size(); ++i) out.p[i % block] += p[i];
    return out;
}

PathLaw path_law(const Instrument& inst, const DensityMatrix& rho, std::size_t n)
{
    const std::size_t a = inst.alphabet();
    double entries = 1.0;
    for (std::size_t k = 0; k < n; ++k) entries *= static_cast<double>(a);
    if (entries > 1e6) throw OverflowError("path_law: dense table past 10^6 entries");

    const ComplexMatrix drift =
        inst.phi_schroedinger().apply(rho.mat()) - rho.mat();
    if (trace_norm_hermitian(hermitize(drift)) > 1e-9)
        throw NotInvariant("path_law: state is not invariant under the instrument");

    PathLaw law{n, a, std::vector<double>(static_cast<std::size_t>(entries), 0.0)};
    // build words from the innermost (last) symbol outward so partial
    // compositions J_{ω_k}∘⋯∘J_{ω_n}(1) are shared along the recursion
    const std::function<void(const ComplexMatrix&, std::size_t, std::size_t,
                             std::size_t)>
        rec = [&](const ComplexMatrix& m, std::size_t depth, std::size_t suffix_idx,
                  std::size_t stride) {
            if (depth == n) {
                law.p[suffix_idx] = std::real(rho.expect(m));
                return;
            }
            for (std::size_t w = 0; w < a; ++w)
                rec(inst.j_ops[w].apply(m), depth + 1, suffix_idx + w * stride,
                    stride * a);
        };
    rec(ComplexMatrix::identity(inst.dim()), 0, 0, 1);
    return law;
}

PathLaw reversed_law(const PathLaw& law, const std::vector<std::size_t>& theta)
{
    require_involution(theta, law.alphabet);
    PathLaw out{law.n, law.alphabet, std::vector<double>(law.p.size(), 0.0)};
    std::vector<std::size_t> word(law.n, 0);
    for (std::size_t idx = 0; idx < law.p.size(); ++idx) {
        std::size_t rest = idx;
        for (std::size_t k = law.n; k-- > 0;) {
            word[k] = rest % law.alphabet;
            rest /= law.alphabet;
        }
        std::size_t rev = 0;
        for (std::size_t k = law.n; k-- > 0;) rev = rev * law.alphabet + theta[word[k]];
        out.p[idx] = law.p[rev];
    }
    return out;
}

ExtReal ep_n(const PathLaw& law, const std::vector<std::size_t>& theta)
{
    const PathLaw rev = reversed_law(law, theta);
    double kl = 0.0;
    for (std::size_t i = 0; i < law.p.size(); ++i) {
        if (law.p[i] <= 1e-15) continue;
        if (rev.p[i] <= 1e-15) return ExtReal::plus_inf();
        kl += law.p[i] * std::log(law.p[i] / rev.p[i]);
    }
    return ExtReal::finite(kl);
}

DecouplingReport upper_decoupling_check(const Instrument& inst, const DensityMatrix& rho,
                                        std::size_t n_max, double candidate_c)
{
    DecouplingReport r{0.0, 0};
    std::vector<PathLaw> laws(n_max + 1);
    for (std::size_t k = 1; k <= n_max; ++k) laws[k] = path_law(inst, rho, k);
    for (std::size_t n = 1; n + 1 <= n_max; ++n) {
        for (std::size_t m = 1; n + m <= n_max; ++m) {
            const PathLaw& joint = laws[n + m];
            const PathLaw& pn = laws[n];
            const PathLaw& pm = laws[m];
            for (std::size_t u = 0; u < pn.p.size(); ++u)
                for (std::size_t v = 0; v < pm.p.size(); ++v) {
                    const double denom = pn.p[u] * pm.p[v];
                    if (denom <= 1e-15) continue;
                    const double ratio = joint.p[u * pm.p.size() + v] / denom;
                    r.best_c = std::max(r.best_c, ratio);
                    if (ratio > candidate_c * (1.0 + 1e-9)) ++r.violations;
                }
        }
    }
    return r;
}

DensityMatrix phi_invariant_state(const Instrument& inst)
{
    const Superoperator sch = inst.phi_schroedinger();
    // Φ_# − id has the invariant states in its kernel
    Superoperator gen = sch;
    gen.mat -= ComplexMatrix::identity(gen.mat.dim());

    // power-iteration warm start to damp transients, then null-space solve
    ComplexMatrix rho = (1.0 / static_cast<double>(inst.dim())) *
                        ComplexMatrix::identity(inst.dim());
    for (int it = 0; it < 64; ++it) rho = hermitize(sch.apply(rho));
    const double residual = (sch.apply(rho) - rho).frob_norm();
    if (residual > 1e-12) return invariant_state(gen);
    const double tr = rho.trace().real();
    return DensityMatrix((1.0 / tr) * rho);
}

std::vector<std::vector<std::size_t>> sample_paths(const Instrument& inst,
                                                   const DensityMatrix& rho,
                                                   std::size_t n, std::size_t n_paths,
                                                   std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t a = inst.alphabet();
    std::vector<ComplexMatrix> sch;
    for (const auto& j : inst.j_ops) sch.push_back(j.mat.adjoint());

    std::vector<std::vector<std::size_t>> paths;
    paths.reserve(n_paths);
    for (std::size_t traj = 0; traj < n_paths; ++traj) {
        std::vector<std::size_t> word;
        word.reserve(n);
        ComplexMatrix state = rho.mat();
        for (std::size_t step = 0; step < n; ++step) {
            std::vector<double> probs(a);
            std::vector<ComplexMatrix> post;
            double total = 0.0;
            for (std::size_t w = 0; w < a; ++w) {
                post.push_back(unvec(sch[w] * vec(state)));
                probs[w] = std::max(0.0, std::real(post[w].trace()));
                total += probs[w];
            }
            double x = unit(rng) * total;
            std::size_t pick = a - 1;
            for (std::size_t w = 0; w < a; ++w) {
                if (x < probs[w]) {
                    pick = w;
                    break;
                }
                x -= probs[w];
            }
            word.push_back(pick);
            state = (1.0 / std::max(probs[pick], 1e-300)) * post[pick];
        }
        paths.push_back(std::move(word));
    }
    return paths;
}

BootstrapEstimate empirical_ep(const std::vector<std::vector<std::size_t>>& paths,
                               const PathLaw& law, const std::vector<std::size_t>& theta,
                               std::size_t n_boot, std::uint64_t seed)
{
    require_involution(theta, law.alphabet);
    const PathLaw rev = reversed_law(law, theta);
    std::vector<double> scores;
    scores.reserve(paths.size());
    for (const auto& w : paths)
        scores.push_back(std::log(law.prob(w) / rev.prob(w)));

    double mean = 0.0;
    for (double s : scores) mean += s;
    mean /= static_cast<double>(scores.size());

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, scores.size() - 1);
    double acc = 0.0, acc2 = 0.0;
    for (std::size_t b = 0; b < n_boot; ++b) {
        double m = 0.0;
        for (std::size_t i = 0; i < scores.size(); ++i) m += scores[pick(rng)];
        m /= static_cast<double>(scores.size());
        acc += m;
        acc2 += m * m;
    }
    acc /= static_cast<double>(n_boot);
    acc2 /= static_cast<double>(n_boot);
    return BootstrapEstimate{mean, std::sqrt(std::max(0.0, acc2 - acc * acc))};
}

} // namespace qtherm
