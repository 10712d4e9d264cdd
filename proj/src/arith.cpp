#include "orderforge/arith.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "orderforge/errors.hpp"

namespace orderforge {

namespace {

std::vector<Triple> enumerate_triples(std::uint32_t k, BlockKind kind) {
    std::vector<Triple> out;
    for (std::uint32_t r = 0; r < k; ++r) {
        for (std::uint32_t s = 0; s < k; ++s) {
            std::uint64_t t = kind == BlockKind::Add ? std::uint64_t{r} + s : std::uint64_t{r} * s;
            if (t < k) out.push_back({r, s, static_cast<std::uint32_t>(t)});
        }
    }
    return out;
}

// Consumes unused points of (b_{r-1}, b_r) in increasing order.
class CodePointAllocator {
public:
    explicit CodePointAllocator(const std::vector<std::uint32_t>& reprs) {
        next_.reserve(reprs.size());
        limit_ = reprs;
        std::uint32_t lo = 0;
        for (auto b : reprs) {
            next_.push_back(lo);
            lo = b + 1;
        }
    }

    std::uint32_t take(std::uint32_t value) {
        if (next_[value] >= limit_[value])
            throw std::logic_error("encode: code points exhausted for value " +
                                   std::to_string(value));
        return next_[value]++;
    }

    // Everything still unallocated below each representative.
    std::vector<std::uint32_t> leftovers() const {
        std::vector<std::uint32_t> out;
        for (std::size_t r = 0; r < next_.size(); ++r)
            for (std::uint32_t p = next_[r]; p < limit_[r]; ++p) out.push_back(p);
        return out;
    }

private:
    std::vector<std::uint32_t> next_;
    std::vector<std::uint32_t> limit_;
};

}  // namespace

std::vector<Triple> truth_table_add(std::uint32_t k) { return enumerate_triples(k, BlockKind::Add); }
std::vector<Triple> truth_table_mul(std::uint32_t k) { return enumerate_triples(k, BlockKind::Mul); }

ArithCarrier encode(std::uint32_t k) {
    if (k == 0) throw UsageError("encode: k must be positive");
    if (k > 20000) throw UsageError("encode: k too large, 10k^2 exceeds the index space");
    const std::uint32_t n = 10 * k * k;

    ArithCarrier carrier;
    carrier.k = k;
    carrier.reprs.reserve(k);
    for (std::uint32_t i = 0; i < k; ++i) carrier.reprs.push_back(7 * k * (i + 1));

    CodePointAllocator codes(carrier.reprs);
    std::uint32_t next_delim = carrier.reprs.back() + 1;

    std::vector<std::uint32_t> order2;
    order2.reserve(n);
    for (auto b : carrier.reprs) order2.push_back(b);

    auto place_blocks = [&](BlockKind kind) {
        for (const auto& triple : enumerate_triples(k, kind)) {
            if (next_delim >= n) throw std::logic_error("encode: delimiters exhausted");
            ArithBlock block;
            block.triple = triple;
            block.kind = kind;
            block.points = {codes.take(triple[0]), codes.take(triple[1]), codes.take(triple[2]),
                            next_delim++};
            for (auto p : block.points) order2.push_back(p);
            carrier.block_log.push_back(block);
        }
        return static_cast<std::uint32_t>(order2.size()) - 1;  // rank of the last delimiter
    };

    const std::uint32_t a1_rank = k - 1;
    const std::uint32_t a2_rank = place_blocks(BlockKind::Add);
    const std::uint32_t a3_rank = place_blocks(BlockKind::Mul);
    carrier.param_ranks = {a1_rank, a2_rank, a3_rank};

    for (auto p : codes.leftovers()) order2.push_back(p);
    for (std::uint32_t p = next_delim; p < n; ++p) order2.push_back(p);
    if (order2.size() != n) throw std::logic_error("encode: layout does not cover 10k^2 points");

    carrier.biorder = BiOrder(std::move(order2));
    return carrier;
}

std::optional<std::uint32_t> code_of(std::uint32_t l, const ArithCarrier& carrier) {
    const std::uint32_t n = carrier.biorder.size();
    if (l >= n) throw UsageError("code_of: point out of range");
    // First representative with b_r >= l; codes iff strictly below it.
    auto it = std::lower_bound(carrier.reprs.begin(), carrier.reprs.end(), l);
    if (it == carrier.reprs.end()) return std::nullopt;  // delimiter region
    if (*it == l) return std::nullopt;                   // a representative
    return static_cast<std::uint32_t>(it - carrier.reprs.begin());
}

DecodeResult decode(const BiOrder& b, const std::array<std::uint32_t, 3>& param_ranks) {
    const std::uint32_t n = b.size();
    if (!(param_ranks[0] < param_ranks[1] && param_ranks[1] < param_ranks[2]) ||
        param_ranks[2] >= n)
        throw UsageError("decode: param ranks must be strictly increasing and in range");

    const auto& order2 = b.order2();
    const std::uint32_t a1_rank = param_ranks[0];
    const std::uint32_t a1_point = order2[a1_rank];

    // Domain = second-order initial segment up to a1; value of an element is
    // its second-order rank. Repr lookups need the domain sorted by first
    // order.
    DecodeResult result;
    result.domain_size = a1_rank + 1;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> dom;  // (first rank, value)
    dom.reserve(result.domain_size);
    for (std::uint32_t j = 0; j <= a1_rank; ++j) dom.emplace_back(order2[j], j);
    std::sort(dom.begin(), dom.end());

    auto repr_value = [&](std::uint32_t point) -> std::optional<std::uint32_t> {
        auto it = std::upper_bound(dom.begin(), dom.end(),
                                   std::make_pair(point, std::uint32_t(0xFFFFFFFFu)));
        if (it == dom.end()) return std::nullopt;
        return it->second;
    };

    auto scan_region = [&](std::uint32_t lo_rank, std::uint32_t hi_rank, std::vector<Triple>& out) {
        if (hi_rank < lo_rank + 4) return;
        for (std::uint32_t j = lo_rank + 1; j + 3 <= hi_rank; ++j) {
            if (order2[j + 3] <= a1_point) continue;  // u4 must lie first-order above a1
            auto x = repr_value(order2[j]);
            if (!x) continue;
            auto y = repr_value(order2[j + 1]);
            if (!y) continue;
            auto z = repr_value(order2[j + 2]);
            if (!z) continue;
            out.push_back({*x, *y, *z});
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
    };

    scan_region(param_ranks[0], param_ranks[1], result.add_triples);
    scan_region(param_ranks[1], param_ranks[2], result.mul_triples);
    return result;
}

RoundtripReport compare_tables(const DecodeResult& got, std::uint32_t k) {
    RoundtripReport report;
    report.expected_domain = k;
    report.decoded_domain = got.domain_size;

    auto diff = [&](const std::vector<Triple>& actual, BlockKind kind) {
        auto expected = enumerate_triples(k, kind);
        std::sort(expected.begin(), expected.end());
        std::vector<Triple> sorted_actual = actual;
        std::sort(sorted_actual.begin(), sorted_actual.end());
        std::vector<Triple> missing, extra;
        std::set_difference(expected.begin(), expected.end(), sorted_actual.begin(),
                            sorted_actual.end(), std::back_inserter(missing));
        std::set_difference(sorted_actual.begin(), sorted_actual.end(), expected.begin(),
                            expected.end(), std::back_inserter(extra));
        for (const auto& t : missing) report.discrepancies.push_back({kind, t, true});
        for (const auto& t : extra) report.discrepancies.push_back({kind, t, false});
    };
    diff(got.add_triples, BlockKind::Add);
    diff(got.mul_triples, BlockKind::Mul);

    report.ok = report.discrepancies.empty() && got.domain_size == k;
    return report;
}

RoundtripReport verify_roundtrip(std::uint32_t k) {
    if (k == 0) throw UsageError("verify_roundtrip: k must be positive");
    const ArithCarrier carrier = encode(k);
    return compare_tables(decode(carrier.biorder, carrier.param_ranks), k);
}

std::string carrier_to_text(const ArithCarrier& c) {
    std::string out = biorder_to_text(c.biorder);
    out += "params " + std::to_string(c.param_ranks[0]) + " " + std::to_string(c.param_ranks[1]) +
           " " + std::to_string(c.param_ranks[2]) + "\n";
    out += "k=" + std::to_string(c.k) + "\n";
    return out;
}

ArithCarrier carrier_from_text(const std::string& text) {
    auto params_pos = text.find("\nparams ");
    if (params_pos == std::string::npos) throw IoError("carrier: missing params line");
    BiOrder biorder = biorder_from_text(text.substr(0, params_pos + 1));

    std::istringstream tail(text.substr(params_pos + 1));
    std::string word;
    std::array<std::uint32_t, 3> param_ranks{};
    if (!(tail >> word) || word != "params" || !(tail >> param_ranks[0] >> param_ranks[1] >>
                                                 param_ranks[2]))
        throw IoError("carrier: malformed params line");
    if (!(tail >> word) || word.rfind("k=", 0) != 0) throw IoError("carrier: missing k= line");
    std::uint32_t k = 0;
    try {
        k = static_cast<std::uint32_t>(std::stoul(word.substr(2)));
    } catch (const std::exception&) {
        throw IoError("carrier: malformed k= value");
    }

    // Structural revalidation: layout must be a carrier that encode could
    // have produced, up to the arithmetic content of the blocks.
    ArithCarrier carrier;
    carrier.k = k;
    carrier.biorder = std::move(biorder);
    if (k == 0 || carrier.biorder.size() != 10 * k * k)
        throw IoError("carrier: size is not 10k^2");
    for (std::uint32_t i = 0; i < k; ++i) carrier.reprs.push_back(7 * k * (i + 1));
    carrier.param_ranks = param_ranks;

    const auto& order2 = carrier.biorder.order2();
    for (std::uint32_t i = 0; i < k; ++i)
        if (order2[i] != carrier.reprs[i])
            throw IoError("carrier: initial segment is not b_0..b_{k-1}");
    if (param_ranks[0] != k - 1) throw IoError("carrier: a1 is not the last representative");
    if (!(param_ranks[0] < param_ranks[1] && param_ranks[1] < param_ranks[2]) ||
        param_ranks[2] >= carrier.biorder.size())
        throw IoError("carrier: params not strictly increasing in range");

    const std::uint32_t last_repr = carrier.reprs.back();
    auto rebuild_blocks = [&](std::uint32_t lo_rank, std::uint32_t hi_rank, BlockKind kind) {
        if ((hi_rank - lo_rank) % 4 != 0)
            throw IoError("carrier: block region is not a multiple of four");
        for (std::uint32_t j = lo_rank + 1; j + 3 <= hi_rank; j += 4) {
            ArithBlock block;
            block.kind = kind;
            block.points = {order2[j], order2[j + 1], order2[j + 2], order2[j + 3]};
            if (block.points[3] <= last_repr)
                throw IoError("carrier: block does not end in a delimiter");
            for (int i = 0; i < 3; ++i) {
                auto v = code_of(block.points[i], carrier);
                if (!v) throw IoError("carrier: block point is not a code point");
                block.triple[i] = *v;
            }
            carrier.block_log.push_back(block);
        }
    };
    rebuild_blocks(param_ranks[0], param_ranks[1], BlockKind::Add);
    rebuild_blocks(param_ranks[1], param_ranks[2], BlockKind::Mul);
    return carrier;
}

void write_carrier(const ArithCarrier& c, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << carrier_to_text(c);
    if (!out) throw IoError("write failed: " + path);
}

ArithCarrier read_carrier(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return carrier_from_text(ss.str());
}

}  // namespace orderforge
