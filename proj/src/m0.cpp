#include "orderforge/m0.hpp"

#include "orderforge/errors.hpp"
#include "orderforge/prng.hpp"
#include "orderforge/probe.hpp"

namespace orderforge {

M0Family assemble_m0(std::uint32_t max_class, std::uint64_t seed) {
    if (max_class < 3) throw UsageError("assemble_m0: max class must be at least 3");
    if (max_class > 16) throw UsageError("assemble_m0: class sizes grow as 40n^2, cap is 16");

    M0Family family;
    family.all_ok = true;
    std::uint64_t base = 0;
    for (std::uint32_t cls = 3; cls <= max_class; ++cls) {
        M0Class entry;
        entry.class_index = cls;
        entry.vertex_base = base;

        // vertex count >= 4 * 10 * cls^2 keeps planting feasible
        const std::uint32_t nv = 40 * cls * cls;
        const std::uint64_t class_seed = sub_stream(seed, kTagM0, cls).next();

        SurgeryResult surgered = surgery(generate(nv, 3, class_seed), cls, class_seed);
        entry.swaps = static_cast<std::uint32_t>(surgered.changelog.size());
        entry.girth_ok = enumerate_small_cycles(surgered.graph, cls).empty();

        entry.target = encode(cls);
        const EndToEndResult run =
            interpret_with_planted_order(surgered.graph, entry.target, class_seed);
        entry.verdict = run.verdict;
        entry.graph = std::move(surgered.graph);

        family.all_ok = family.all_ok && entry.girth_ok && entry.verdict;
        base += nv;
        family.classes.push_back(std::move(entry));
    }
    return family;
}

}  // namespace orderforge
