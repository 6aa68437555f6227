#pragma once

#include <cstdint>
#include <vector>

namespace cpotts {

// Magnetisation sector of the length-L four-state chain, plus the twist
// angles it is diagonalized with.  up1/up2 count colour-1/colour-2 up spins,
// so S_iz = up_i - L/2 (an integer for even L) and l_i = 2|S_iz| is the
// through-line count of the matching loop sector.
struct SectorLabel {
    int L = 0;
    int up1 = 0, up2 = 0;
    double phi1 = 0.0, phi2 = 0.0;

    int s1z() const { return up1 - L / 2; }
    int s2z() const { return up2 - L / 2; }
    int l1() const { return 2 * (s1z() < 0 ? -s1z() : s1z()); }
    int l2() const { return 2 * (s2z() < 0 ? -s2z() : s2z()); }
};

// Twist assignment used when the chain represents the loop model: a colour
// carries the angle gamma exactly in its zero-magnetisation sector.
inline double loop_twist(int siz, double gamma) { return siz == 0 ? gamma : 0.0; }

// Chain configurations are packed two bits per site, site 0 leftmost
// (most significant): digit(site) = (code >> 2*(L-1-site)) & 3, with the
// single-site encoding of rmatrix.hpp (bit 1 = colour-1 up, bit 0 = colour-2 up).
inline int site_digit(std::uint64_t code, int site, int L) {
    return int(code >> (2 * (L - 1 - site))) & 3;
}
inline std::uint64_t with_site_digit(std::uint64_t code, int site, int L, int digit) {
    const int sh = 2 * (L - 1 - site);
    return (code & ~(std::uint64_t(3) << sh)) | (std::uint64_t(digit) << sh);
}

// Configuration with every site content moved one site to the left:
// digit'(i) = digit(i+1 mod L).
std::uint64_t rotate_left(std::uint64_t code, int L);
// ... and to the right: digit'(i) = digit(i-1 mod L).
std::uint64_t rotate_right(std::uint64_t code, int L);

// Enumerated basis of one magnetisation sector, codes ascending.
struct SectorBasis {
    SectorLabel sector;
    std::vector<std::uint64_t> states;

    int dim() const { return int(states.size()); }
    // Binary search; -1 when the code lies outside the sector.
    int index_of(std::uint64_t code) const;
};

// Builds the basis with fixed colour magnetisations S1z, S2z.  Throws for odd
// or oversized L and for |S_iz| > L/2.  Dimension is
// binom(L, L/2+S1z) * binom(L, L/2+S2z) by the two-colour factorization.
SectorBasis enumerate_sector(int L, int s1z, int s2z, double phi1 = 0.0,
                             double phi2 = 0.0);

// binom(L, L/2+s1z) * binom(L, L/2+s2z) without enumeration.
long long sector_dimension(int L, int s1z, int s2z);

}  // namespace cpotts
