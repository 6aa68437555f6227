#include "cpotts/sector.hpp"

#include <algorithm>
#include <stdexcept>

namespace cpotts {

std::uint64_t rotate_left(std::uint64_t code, int L) {
    const int head = site_digit(code, 0, L);
    const std::uint64_t mask = (L == 32) ? ~std::uint64_t(0)
                                         : ((std::uint64_t(1) << (2 * L)) - 1);
    return ((code << 2) & mask) | std::uint64_t(head);
}

std::uint64_t rotate_right(std::uint64_t code, int L) {
    const int tail = site_digit(code, L - 1, L);
    return (code >> 2) | (std::uint64_t(tail) << (2 * (L - 1)));
}

int SectorBasis::index_of(std::uint64_t code) const {
    const auto it = std::lower_bound(states.begin(), states.end(), code);
    if (it == states.end() || *it != code) return -1;
    return int(it - states.begin());
}

long long sector_dimension(int L, int s1z, int s2z) {
    auto binom = [](int n, int r) -> long long {
        if (r < 0 || r > n) return 0;
        long long out = 1;
        for (int i = 1; i <= r; ++i) out = out * (n - r + i) / i;
        return out;
    };
    return binom(L, L / 2 + s1z) * binom(L, L / 2 + s2z);
}

SectorBasis enumerate_sector(int L, int s1z, int s2z, double phi1, double phi2) {
    if (L < 2 || L % 2 != 0) throw std::invalid_argument("sector: L must be even and >= 2");
    if (L > 14) throw std::invalid_argument("sector: L > 14 exceeds the enumeration cap");
    if (std::abs(s1z) > L / 2 || std::abs(s2z) > L / 2)
        throw std::invalid_argument("sector: |S_iz| > L/2");

    const int up1 = L / 2 + s1z, up2 = L / 2 + s2z;

    // All L-bit masks with a fixed popcount, ascending (Gosper's hack).
    auto masks = [L](int ones) {
        std::vector<std::uint32_t> out;
        if (ones == 0) {
            out.push_back(0);
            return out;
        }
        std::uint32_t m = (std::uint32_t(1) << ones) - 1;
        const std::uint32_t limit = std::uint32_t(1) << L;
        while (m < limit) {
            out.push_back(m);
            const std::uint32_t c = m & -m, r = m + c;
            m = (((r ^ m) >> 2) / c) | r;
        }
        return out;
    };

    // Interleave: colour-1 mask supplies bit 1 of each site digit, colour-2
    // mask bit 0; mask bit position j corresponds to site L-1-j so that
    // ascending masks give ascending codes within fixed colour-1 content.
    const auto m1 = masks(up1), m2 = masks(up2);
    SectorBasis basis;
    basis.sector = SectorLabel{L, up1, up2, phi1, phi2};
    basis.states.reserve(m1.size() * m2.size());
    auto spread = [](std::uint32_t m) {
        std::uint64_t out = 0;
        for (int j = 0; m != 0; ++j, m >>= 1)
            if (m & 1) out |= std::uint64_t(1) << (2 * j);
        return out;
    };
    for (const auto a : m1) {
        const std::uint64_t hi = spread(a) << 1;
        for (const auto b : m2) basis.states.push_back(hi | spread(b));
    }
    std::sort(basis.states.begin(), basis.states.end());
    return basis;
}

}  // namespace cpotts
