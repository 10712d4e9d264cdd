#ifndef ORDERFORGE_BIORDER_HPP
#define ORDERFORGE_BIORDER_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace orderforge {

// A finite set carrying two total orders, held in canonical form: elements
// are identified with their first-order ranks, and order2[j] is the
// first-order rank of the element whose second-order rank is j. Two
// bi-orders are isomorphic exactly when their order2 permutations agree.
class BiOrder {
public:
    BiOrder() = default;
    explicit BiOrder(std::vector<std::uint32_t> order2);  // validates bijection

    // Canonicalize from explicit enumerations: by_first lists element ids in
    // increasing first order, by_second the same ids in increasing second
    // order. Ids may be arbitrary (relabeling-invariant).
    static BiOrder from_orders(std::span<const std::uint64_t> by_first,
                               std::span<const std::uint64_t> by_second);

    std::uint32_t size() const { return static_cast<std::uint32_t>(order2_.size()); }
    const std::vector<std::uint32_t>& order2() const { return order2_; }

    // rank2_of[first-order rank] = second-order rank (inverse of order2).
    std::vector<std::uint32_t> rank2_of() const;

    bool operator==(const BiOrder&) const = default;

private:
    std::vector<std::uint32_t> order2_;
};

// Text format: line 1 `biorder v1 N=<N>`, line 2 order2 as N integers.
std::string biorder_to_text(const BiOrder& b);
BiOrder biorder_from_text(const std::string& text);
void write_biorder(const BiOrder& b, const std::string& path);
BiOrder read_biorder(const std::string& path);

}  // namespace orderforge

#endif
