#include "cpotts/linalg.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

// Make LAPACKE's complex type std::complex<double> so Eigen buffers pass through.
#define LAPACK_COMPLEX_CUSTOM
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace cpotts {

namespace {

std::vector<Cplx> zgeev(Eigen::MatrixXcd& m, Eigen::MatrixXcd* vectors) {
    if (m.rows() != m.cols()) throw std::invalid_argument("zgeev: square only");
    const lapack_int n = static_cast<lapack_int>(m.rows());
    std::vector<Cplx> values(n);
    if (vectors) vectors->resize(n, n);
    const lapack_int info = LAPACKE_zgeev(
        LAPACK_COL_MAJOR, 'N', vectors ? 'V' : 'N', n, m.data(), n,
        values.data(), nullptr, 1, vectors ? vectors->data() : nullptr,
        vectors ? n : 1);
    if (info != 0)
        throw std::runtime_error("zgeev failed, info=" + std::to_string(info));
    return values;
}

}  // namespace

std::vector<Cplx> dense_eigenvalues(Eigen::MatrixXcd m) {
    return zgeev(m, nullptr);
}

EigenSystem dense_eigensystem(Eigen::MatrixXcd m) {
    EigenSystem es;
    es.values = zgeev(m, &es.vectors);
    return es;
}

void sort_spectrum(std::vector<Cplx>& v) {
    std::sort(v.begin(), v.end(), [](const Cplx& a, const Cplx& b) {
        const double ma = std::abs(a), mb = std::abs(b);
        if (ma != mb) return ma > mb;
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });
}

std::vector<Cplx> top_spectrum(const Eigen::MatrixXcd& m, int count) {
    std::vector<Cplx> v = dense_eigenvalues(m);
    sort_spectrum(v);
    if (count >= 0 && count < static_cast<int>(v.size())) v.resize(count);
    return v;
}

}  // namespace cpotts
