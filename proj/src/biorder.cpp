#include "orderforge/biorder.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "orderforge/errors.hpp"

namespace orderforge {

namespace {

void check_permutation(const std::vector<std::uint32_t>& v, const char* what) {
    std::vector<bool> seen(v.size(), false);
    for (auto x : v) {
        if (x >= v.size() || seen[x])
            throw UsageError(std::string(what) + ": not a bijection on {0..N-1}");
        seen[x] = true;
    }
}

}  // namespace

BiOrder::BiOrder(std::vector<std::uint32_t> order2) : order2_(std::move(order2)) {
    check_permutation(order2_, "biorder");
}

BiOrder BiOrder::from_orders(std::span<const std::uint64_t> by_first,
                             std::span<const std::uint64_t> by_second) {
    if (by_first.size() != by_second.size())
        throw UsageError("biorder: the two enumerations differ in length");
    std::unordered_map<std::uint64_t, std::uint32_t> first_rank;
    first_rank.reserve(by_first.size());
    for (std::size_t i = 0; i < by_first.size(); ++i) {
        if (!first_rank.emplace(by_first[i], static_cast<std::uint32_t>(i)).second)
            throw UsageError("biorder: duplicate id in first order");
    }
    std::vector<std::uint32_t> order2(by_second.size());
    for (std::size_t j = 0; j < by_second.size(); ++j) {
        auto it = first_rank.find(by_second[j]);
        if (it == first_rank.end())
            throw UsageError("biorder: second order mentions unknown id");
        order2[j] = it->second;
    }
    return BiOrder(std::move(order2));
}

std::vector<std::uint32_t> BiOrder::rank2_of() const {
    std::vector<std::uint32_t> inv(order2_.size());
    for (std::uint32_t j = 0; j < order2_.size(); ++j) inv[order2_[j]] = j;
    return inv;
}

std::string biorder_to_text(const BiOrder& b) {
    std::string out = "biorder v1 N=" + std::to_string(b.size()) + "\n";
    const auto& o2 = b.order2();
    for (std::uint32_t j = 0; j < b.size(); ++j) {
        if (j) out.push_back(' ');
        out += std::to_string(o2[j]);
    }
    out.push_back('\n');
    return out;
}

BiOrder biorder_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string word;
    std::uint64_t n = 0;
    if (!(in >> word) || word != "biorder") throw IoError("biorder: missing magic");
    if (!(in >> word) || word != "v1") throw IoError("biorder: unsupported version");
    if (!(in >> word) || word.rfind("N=", 0) != 0) throw IoError("biorder: missing N=");
    try {
        n = std::stoull(word.substr(2));
    } catch (const std::exception&) {
        throw IoError("biorder: malformed N= value");
    }
    if (n > (1u << 28)) throw IoError("biorder: N out of range");
    std::vector<std::uint32_t> order2(n);
    for (std::uint64_t j = 0; j < n; ++j) {
        if (!(in >> order2[j])) throw IoError("biorder: truncated order2");
    }
    try {
        return BiOrder(std::move(order2));
    } catch (const UsageError& e) {
        throw IoError(std::string("biorder: ") + e.what());
    }
}

void write_biorder(const BiOrder& b, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << biorder_to_text(b);
    if (!out) throw IoError("write failed: " + path);
}

BiOrder read_biorder(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return biorder_from_text(ss.str());
}

}  // namespace orderforge
