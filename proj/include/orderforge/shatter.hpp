#ifndef ORDERFORGE_SHATTER_HPP
#define ORDERFORGE_SHATTER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace orderforge {

// F_p^n with points indexed by base-p digit strings; coordinate 1 is the
// most significant digit, so the lexicographic order on vectors is plain
// integer order on indices.
class PointSpace {
public:
    PointSpace(std::uint32_t p, std::uint32_t n);  // p in {2,3,5}, p^n capped

    std::uint32_t p() const { return p_; }
    std::uint32_t n() const { return n_; }
    std::uint32_t point_count() const { return count_; }

    std::uint32_t digit(std::uint32_t point, std::uint32_t coord) const;  // coord 1..n
    std::uint32_t add(std::uint32_t x, std::uint32_t y) const;
    std::uint32_t sub(std::uint32_t x, std::uint32_t y) const;
    std::uint32_t scale(std::uint32_t t, std::uint32_t x) const;

    // Leading coordinate: least i with digit(x, i) != 0 (x nonzero).
    std::uint32_t leading_coord(std::uint32_t x) const;

private:
    std::uint32_t p_, n_, count_;
    std::vector<std::uint32_t> pow_;  // pow_[i] = p^i
};

// The ambient comparison: a strict total order (lex / explicit ranks /
// seeded random) or, for p = 2, an arbitrary tournament.
class PointOrder {
public:
    enum class Kind { Lex, Explicit, Random, Tournament };

    static PointOrder lex(const PointSpace& space);
    static PointOrder explicit_ranks(const PointSpace& space, std::vector<std::uint32_t> rank_of);
    static PointOrder random(const PointSpace& space, std::uint64_t seed);
    static PointOrder random_tournament(const PointSpace& space, std::uint64_t seed);  // p == 2

    Kind kind() const { return kind_; }
    bool is_tournament() const { return kind_ == Kind::Tournament; }
    bool less(std::uint32_t x, std::uint32_t y) const;

private:
    PointOrder() = default;
    Kind kind_ = Kind::Lex;
    std::uint32_t count_ = 0;
    std::vector<std::uint32_t> rank_of_;  // empty for Lex and Tournament
    std::vector<std::uint8_t> bits_;      // tournament: bit for each unordered pair
    std::size_t pair_index(std::uint32_t x, std::uint32_t y) const;
};

using LinePermutation = std::vector<std::uint8_t>;  // pi over {0..p-1}

// Line L = {base + t*dir}: enumerate in lex order d_0 < ... < d_{p-1} and
// return the unique pi with d_{pi(0)} < d_{pi(1)} < ... under `order`.
LinePermutation color_line(const PointSpace& space, std::uint32_t base, std::uint32_t dir,
                           const PointOrder& order);

struct AffineSubspace {
    std::uint32_t base = 0;
    std::vector<std::uint32_t> dirs;  // RREF basis of the direction space
};

struct MonoSubspace {
    AffineSubspace subspace;
    LinePermutation color;
};

// Exhaustive search: direction spaces in Gaussian-binomial (pivot-profile)
// enumeration order, then coset representatives ascending; first hit wins.
// Returns nullopt when no monochromatic k-flat exists at this n.
std::optional<MonoSubspace> find_mono_subspace(const PointSpace& space, std::uint32_t k,
                                               const PointOrder& order);

struct BasisData {
    std::vector<std::uint32_t> b;      // b^1..b^k, greedily lex-minimal
    std::vector<std::uint32_t> omega;  // leading coordinates, strictly decreasing
};

BasisData minimal_basis(const PointSpace& space, const AffineSubspace& w);

// The unique point of W whose omega_i coordinate equals s[i] for all i
// (triangular solve along the omega coordinates).
std::uint32_t d_point(const PointSpace& space, const AffineSubspace& w, const BasisData& basis,
                      const std::vector<std::uint8_t>& s);

// phi_pi(x, y): conjunction over i < p-1 of x + pi(i) y < x + pi(i+1) y.
bool eval_phi_pi(const PointSpace& space, std::uint32_t x, std::uint32_t y,
                 const LinePermutation& pi, const PointOrder& order);

struct ShatterWitness {
    LinePermutation pi;
    AffineSubspace subspace;
    BasisData basis;
    std::vector<std::uint32_t> d_points;  // indexed by subset bitmask of {1..k}
};

struct ShatterResult {
    bool found = false;
    bool verified = false;
    ShatterWitness witness;
};

// find_mono_subspace + minimal_basis + all d_I, then check the shattering
// pattern: phi_pi(d_I, b^l) holds exactly when l is outside I.
ShatterResult build_and_verify_witness(const PointSpace& space, std::uint32_t k,
                                       const PointOrder& order);

// Independent recheck used by tests and the CLI: every line of W has the
// claimed color.
bool recheck_mono(const PointSpace& space, const MonoSubspace& mono, const PointOrder& order);

// Explicit order file: one line of p^n point indices in increasing rank.
PointOrder read_point_order(const PointSpace& space, const std::string& path);

}  // namespace orderforge

#endif
