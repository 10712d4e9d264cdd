#ifndef ORDERFORGE_ARITH_HPP
#define ORDERFORGE_ARITH_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orderforge/biorder.hpp"

namespace orderforge {

using Triple = std::array<std::uint32_t, 3>;

enum class BlockKind : std::uint8_t { Add, Mul };

struct ArithBlock {
    Triple triple;                        // (r, s, t)
    BlockKind kind;
    std::array<std::uint32_t, 4> points;  // first-order ranks (c_r, c_s, c_t, d)
};

// The bi-order encoding of ({0..k-1}, +, x): n = 10k^2 elements, the k
// representatives b_i = 7k(i+1) form the second-order initial segment, and
// every arithmetic fact (r,s,t) occupies a 4-point second-order interval
// ending in a delimiter (a point first-order above b_{k-1}).
struct ArithCarrier {
    std::uint32_t k = 0;
    BiOrder biorder;
    std::vector<std::uint32_t> reprs;          // b_0..b_{k-1}, first-order ranks
    std::array<std::uint32_t, 3> param_ranks;  // second-order ranks of a1, a2, a3
    std::vector<ArithBlock> block_log;
};

struct DecodeResult {
    std::uint32_t domain_size = 0;
    std::vector<Triple> add_triples;  // sorted
    std::vector<Triple> mul_triples;  // sorted
};

struct Discrepancy {
    BlockKind table;
    Triple triple;
    bool missing;  // true: expected but absent; false: unexpected extra
};

struct RoundtripReport {
    bool ok = false;
    std::uint32_t expected_domain = 0;
    std::uint32_t decoded_domain = 0;
    std::vector<Discrepancy> discrepancies;
};

ArithCarrier encode(std::uint32_t k);

// The value a point codes for: r when b_{r-1} < l < b_r (b_{-1} = -1),
// nothing for representatives, delimiters and other leftover points.
std::optional<std::uint32_t> code_of(std::uint32_t l, const ArithCarrier& carrier);

// Evaluates the fixed formula pair over {<1,<2} with parameters a1,a2,a3:
//   Dom(x)      x <=2 a1
//   Repr(c)=y   y is the <1-least domain element with c <1 y
//   phi(x,y,z)  some 4-point <2-interval (u1,u2,u3,u4) inside (a1,a2]_2 with
//               a1 <1 u4 has Repr(u1)=x, Repr(u2)=y, Repr(u3)=z
//   psi         the same over (a2,a3]_2
// Domain values are second-order ranks. The routine never sees k.
DecodeResult decode(const BiOrder& b, const std::array<std::uint32_t, 3>& param_ranks);

// Exact truth tables {(r,s,t) : r op s = t < k}, the independent reference.
std::vector<Triple> truth_table_add(std::uint32_t k);
std::vector<Triple> truth_table_mul(std::uint32_t k);

RoundtripReport verify_roundtrip(std::uint32_t k);
RoundtripReport compare_tables(const DecodeResult& got, std::uint32_t k);

// Carrier file = biorder file plus `params <a1> <a2> <a3>` and `k=<k>` lines.
// Reading revalidates all carrier invariants and rebuilds the block log.
std::string carrier_to_text(const ArithCarrier& c);
ArithCarrier carrier_from_text(const std::string& text);
void write_carrier(const ArithCarrier& c, const std::string& path);
ArithCarrier read_carrier(const std::string& path);

}  // namespace orderforge

#endif
