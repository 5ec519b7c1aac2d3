#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace ncbcast {

using PacketId = std::uint32_t;

// Element of GF(3). Value invariant: v in {0,1,2}.
struct Gf3 {
    std::uint8_t v = 0;

    constexpr Gf3() = default;
    constexpr explicit Gf3(unsigned x) : v(static_cast<std::uint8_t>(x % 3)) {}

    constexpr bool is_zero() const { return v == 0; }

    friend constexpr Gf3 operator+(Gf3 a, Gf3 b) { return Gf3(unsigned(a.v) + b.v); }
    friend constexpr Gf3 operator-(Gf3 a, Gf3 b) { return Gf3(unsigned(a.v) + 3u - b.v); }
    friend constexpr Gf3 operator*(Gf3 a, Gf3 b) { return Gf3(unsigned(a.v) * b.v); }
    friend constexpr bool operator==(Gf3 a, Gf3 b) { return a.v == b.v; }
    friend constexpr bool operator!=(Gf3 a, Gf3 b) { return a.v != b.v; }

    constexpr Gf3 neg() const { return Gf3(3u - v); }

    // 1^-1 = 1, 2^-1 = 2 (2*2 = 4 = 1 mod 3); inverse of zero is undefined.
    Gf3 inv() const {
        if (v == 0) throw std::domain_error("gf3: inverse of zero");
        return *this;
    }
};

// Sparse coefficient vector over GF(3): sorted (index, coeff) terms, zeros omitted.
class CoeffVector {
public:
    using Term = std::pair<PacketId, Gf3>;

    CoeffVector() = default;

    static CoeffVector unit(PacketId p, Gf3 c = Gf3(1));

    bool zero() const { return terms_.empty(); }
    std::size_t support_size() const { return terms_.size(); }
    const std::vector<Term>& terms() const { return terms_; }

    Gf3 coeff(PacketId p) const;
    void set(PacketId p, Gf3 c);

    // Lowest nonzero index and its coefficient; vector must be nonzero.
    PacketId leading() const;
    Gf3 leading_coeff() const;

    void scale(Gf3 a);
    // *this += a * x
    void add_scaled(Gf3 a, const CoeffVector& x);

    std::vector<PacketId> support() const;

    friend bool operator==(const CoeffVector& a, const CoeffVector& b) {
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const CoeffVector& a, const CoeffVector& b) { return !(a == b); }
    friend bool operator<(const CoeffVector& a, const CoeffVector& b);

private:
    std::vector<Term> terms_;
};

inline CoeffVector axpy(Gf3 a, const CoeffVector& x, const CoeffVector& y) {
    CoeffVector r = y;
    r.add_scaled(a, x);
    return r;
}

// Reduced row-echelon basis of a GF(3) knowledge space, keyed by pivot index.
// Rows keep leading coefficient 1; pivot columns are zero in every other row,
// so each row reads e_pivot + (tail over non-pivot columns above the pivot).
class KnowledgeBasis {
public:
    struct InsertResult {
        bool grew = false;
        std::vector<PacketId> newly_decoded;  // pivots whose row became a unit vector
    };

    InsertResult insert(const CoeffVector& v);

    // Residual of v after eliminating every pivot-column entry.
    CoeffVector reduce(CoeffVector v) const;
    bool contains(const CoeffVector& v) const { return reduce(v).zero(); }

    std::size_t rank() const { return rows_.size(); }
    bool pivot(PacketId p) const { return rows_.count(p) != 0; }
    bool decoded(PacketId p) const { return decoded_.count(p) != 0; }
    bool heard(PacketId p) const { return pivot(p) || users_.count(p) != 0; }

    // Heard-but-undecoded indices, ascending.
    const std::set<PacketId>& mixed() const { return mixed_; }

    // Cheap per-slot consistency: seen is the pivot set, so |seen| == rank by
    // construction; decoded is a subset of seen, so its count cannot exceed rank.
    bool counts_consistent() const { return decoded_.size() <= rows_.size(); }

    std::vector<CoeffVector> rows() const;
    std::set<PacketId> seen_set() const;
    std::set<PacketId> decoded_set() const;
    std::set<PacketId> heard_set() const;

private:
    void register_tail(PacketId pivot, const CoeffVector& row);
    void unregister_tail(PacketId pivot, const CoeffVector& row, PacketId skip);

    std::map<PacketId, CoeffVector> rows_;                      // pivot -> row
    std::unordered_map<PacketId, std::vector<PacketId>> users_; // tail column -> row pivots (never empty)
    std::unordered_set<PacketId> decoded_;
    std::set<PacketId> mixed_;
};

}  // namespace ncbcast
