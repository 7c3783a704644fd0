#include "qtherm/tensor.hpp"

#include <algorithm>
#include <string>

namespace qtherm {

namespace {
std::size_t& tensor_cap()
{
    static std::size_t cap = 4096; // 2^12 exact-diagonalization budget
    return cap;
}
} // namespace

std::size_t max_tensor_dim() { return tensor_cap(); }
void set_max_tensor_dim(std::size_t d) { tensor_cap() = d; }

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b)
{
    const std::size_t da = a.dim(), db = b.dim();
    if (da * db > max_tensor_dim())
        throw OverflowError("kron: product dimension " + std::to_string(da * db) +
                            " exceeds cap " + std::to_string(max_tensor_dim()));
    ComplexMatrix r(da * db);
    for (std::size_t i1 = 0; i1 < da; ++i1)
        for (std::size_t j1 = 0; j1 < da; ++j1) {
            const cplx aij = a(i1, j1);
            if (aij == cplx(0.0, 0.0)) continue;
            for (std::size_t i2 = 0; i2 < db; ++i2)
                for (std::size_t j2 = 0; j2 < db; ++j2)
                    r(i1 * db + i2, j1 * db + j2) = aij * b(i2, j2);
        }
    return r;
}

namespace {

// Offsets of all multi-index combinations over the factor subset `subset`
// (strides taken from the full factor list).
std::vector<std::size_t> subset_offsets(const std::vector<std::size_t>& dims,
                                        const std::vector<std::size_t>& subset)
{
    std::vector<std::size_t> strides(dims.size(), 1);
    for (std::size_t f = dims.size(); f-- > 1;)
        strides[f - 1] = strides[f] * dims[f];

    std::size_t count = 1;
    for (auto s : subset) count *= dims[s];
    std::vector<std::size_t> off(count, 0);
    std::size_t block = count;
    for (auto s : subset) {
        block /= dims[s];
        for (std::size_t i = 0; i < count; ++i)
            off[i] += ((i / block) % dims[s]) * strides[s];
    }
    return off;
}

} // namespace

ComplexMatrix partial_trace(const ComplexMatrix& a, const std::vector<std::size_t>& dims,
                            const std::vector<std::size_t>& keep)
{
    std::size_t total = 1;
    for (auto d : dims) total *= d;
    if (total != a.dim())
        throw ShapeMismatch("partial_trace: factor dims do not multiply to matrix dim");
    if (!std::is_sorted(keep.begin(), keep.end()) ||
        std::adjacent_find(keep.begin(), keep.end()) != keep.end())
        throw ShapeMismatch("partial_trace: keep list must be strictly increasing");
    for (auto k : keep)
        if (k >= dims.size()) throw ShapeMismatch("partial_trace: keep index out of range");

    std::vector<std::size_t> traced;
    for (std::size_t f = 0; f < dims.size(); ++f)
        if (!std::binary_search(keep.begin(), keep.end(), f)) traced.push_back(f);

    const auto koff = subset_offsets(dims, keep);
    const auto toff = subset_offsets(dims, traced);

    ComplexMatrix r(koff.size());
    for (std::size_t i = 0; i < koff.size(); ++i)
        for (std::size_t j = 0; j < koff.size(); ++j) {
            cplx s = 0.0;
            for (auto t : toff) s += a(koff[i] + t, koff[j] + t);
            r(i, j) = s;
        }
    return r;
}

ComplexMatrix embed(const ComplexMatrix& op, const std::vector<std::size_t>& dims,
                    const std::vector<std::size_t>& sites)
{
    std::size_t total = 1, dsites = 1;
    for (auto d : dims) total *= d;
    for (auto s : sites) {
        if (s >= dims.size()) throw ShapeMismatch("embed: site index out of range");
        dsites *= dims[s];
    }
    if (!std::is_sorted(sites.begin(), sites.end()) ||
        std::adjacent_find(sites.begin(), sites.end()) != sites.end())
        throw ShapeMismatch("embed: site list must be strictly increasing");
    if (dsites != op.dim())
        throw ShapeMismatch("embed: operator dim does not match site dims");
    if (total > max_tensor_dim())
        throw OverflowError("embed: total dimension exceeds cap");

    std::vector<std::size_t> others;
    for (std::size_t f = 0; f < dims.size(); ++f)
        if (!std::binary_search(sites.begin(), sites.end(), f)) others.push_back(f);

    const auto soff = subset_offsets(dims, sites);
    const auto ooff = subset_offsets(dims, others);

    ComplexMatrix r(total);
    for (std::size_t a = 0; a < soff.size(); ++a)
        for (std::size_t b = 0; b < soff.size(); ++b) {
            const cplx v = op(a, b);
            if (v == cplx(0.0, 0.0)) continue;
            for (auto o : ooff) r(soff[a] + o, soff[b] + o) = v;
        }
    return r;
}

cvector vec(const ComplexMatrix& x)
{
    const std::size_t d = x.dim();
    cvector v(d * d);
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < d; ++i) v[j * d + i] = x(i, j);
    return v;
}

ComplexMatrix unvec(const cvector& v)
{
    std::size_t d = 0;
    while (d * d < v.size()) ++d;
    if (d * d != v.size()) throw ShapeMismatch("unvec: length is not a perfect square");
    ComplexMatrix x(d);
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < d; ++i) x(i, j) = v[j * d + i];
    return x;
}

ComplexMatrix left_mult(const ComplexMatrix& a)
{
    return kron(ComplexMatrix::identity(a.dim()), a);
}

ComplexMatrix right_mult(const ComplexMatrix& b)
{
    return kron(b.transpose(), ComplexMatrix::identity(b.dim()));
}

ComplexMatrix pauli_x()
{
    ComplexMatrix m(2);
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return m;
}

ComplexMatrix pauli_y()
{
    ComplexMatrix m(2);
    m(0, 1) = cplx(0.0, -1.0);
    m(1, 0) = cplx(0.0, 1.0);
    return m;
}

ComplexMatrix pauli_z()
{
    ComplexMatrix m(2);
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return m;
}

ComplexMatrix pauli_string(const std::string& s)
{
    if (s.empty()) throw ShapeMismatch("pauli_string: empty string");
    ComplexMatrix r = ComplexMatrix::identity(1);
    for (char c : s) {
        ComplexMatrix p;
        switch (c) {
        case 'I': p = ComplexMatrix::identity(2); break;
        case 'X': p = pauli_x(); break;
        case 'Y': p = pauli_y(); break;
        case 'Z': p = pauli_z(); break;
        default:
            throw ShapeMismatch(std::string("pauli_string: invalid character '") + c + "'");
        }
        r = kron(r, p);
    }
    return r;
}

} // namespace qtherm
