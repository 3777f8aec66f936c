#ifndef PRMAN_FLOORPLAN_HPP
#define PRMAN_FLOORPLAN_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "prman/errors.hpp"
#include "prman/fabric.hpp"

// Region definition, slot partitioning, placement enumeration and the
// utilization/wastage/reconfiguration-time metric suite.

namespace prman::floorplan {

using fabric::DeviceGeometry;
using fabric::RegionSpan;
using fabric::ResourceType;

// Column requirement of one module version (W_i per resource type).
struct ModuleRequirement {
    std::string name;
    int w_clb = 0;
    int w_bram = 0;
    int w_dsp = 0;

    int total() const { return w_clb + w_bram + w_dsp; }
};

struct TypeCounts {
    int clb = 0;
    int bram = 0;
    int dsp = 0;

    int total() const { return clb + bram + dsp; }
    int& of(ResourceType t) {
        static int ignored;
        switch (t) {
        case ResourceType::CLB: return clb;
        case ResourceType::BRAM: return bram;
        case ResourceType::DSP: return dsp;
        default: ignored = 0; return ignored;
        }
    }
    int of(ResourceType t) const { return const_cast<TypeCounts*>(this)->of(t); }

    friend TypeCounts operator*(const TypeCounts& c, int k) {
        return {c.clb * k, c.bram * k, c.dsp * k};
    }
    friend bool operator==(const TypeCounts&, const TypeCounts&) = default;
};

inline TypeCounts count_types(const std::vector<ResourceType>& signature) {
    TypeCounts c;
    for (auto t : signature) c.of(t) += 1;
    return c;
}

inline bool covers(const TypeCounts& have, const ModuleRequirement& need) {
    return have.clb >= need.w_clb && have.bram >= need.w_bram && have.dsp >= need.w_dsp;
}

struct PRRegion {
    std::string name;
    RegionSpan span;

    TypeCounts counts(const DeviceGeometry& geom) const {
        return count_types(column_signature(geom, span));
    }
};

// Exact ratio kept alongside its conventional renderings.
struct Ratio {
    long long num = 0;
    long long den = 1;

    double value() const { return den == 0 ? 0.0 : double(num) / double(den); }
    int percent_nearest() const { return int((200 * num + den) / (2 * den)); }
    int percent_floor() const { return int(100 * num / den); }
};

// Eq. 5 per-type rates, Eq. 4/6 total rate and Eq. 7 wastage.
struct MetricSet {
    std::map<ResourceType, Ratio> ra_per_type;
    Ratio ra_total;
    int a_req = 0;
    int a_res = 0;

    double wastage() const { return 1.0 - ra_total.value(); }
};

inline MetricSet utilization(const ModuleRequirement& req, const TypeCounts& reserved) {
    MetricSet m;
    auto add = [&](ResourceType t, int w, int n) {
        if (w > 0 && n == 0)
            throw DivisionByZeroReservation(std::string(fabric::to_string(t)) +
                                            " required but none reserved");
        if (n > 0) m.ra_per_type[t] = Ratio{w, n};
    };
    add(ResourceType::CLB, req.w_clb, reserved.clb);
    add(ResourceType::BRAM, req.w_bram, reserved.bram);
    add(ResourceType::DSP, req.w_dsp, reserved.dsp);
    m.a_req = req.total();
    m.a_res = reserved.total();
    if (m.a_res == 0) throw DivisionByZeroReservation("empty reservation");
    m.ra_total = Ratio{m.a_req, m.a_res};
    return m;
}

// A region's decomposition into equal base slots plus per-module placements.
class PartitionPlan {
public:
    PartitionPlan(PRRegion region, std::vector<RegionSpan> base_slots,
                  std::map<std::string, int> slots_required)
        : region_(std::move(region)), base_slots_(std::move(base_slots)),
          slots_required_(std::move(slots_required)) {}

    const PRRegion& region() const { return region_; }
    const std::vector<RegionSpan>& base_slots() const { return base_slots_; }
    int slot_count() const { return static_cast<int>(base_slots_.size()); }

    bool feasible(const std::string& module) const {
        auto it = slots_required_.find(module);
        return it != slots_required_.end() && it->second > 0;
    }

    // Contiguous base slots needed by the module; throws if it cannot fit.
    int slots_required(const std::string& module) const {
        auto it = slots_required_.find(module);
        if (it == slots_required_.end())
            throw UnknownModule("'" + module + "' not in plan for region " + region_.name);
        if (it->second <= 0)
            throw InfeasibleRequirement("'" + module + "' exceeds capacity of region " +
                                        region_.name);
        return it->second;
    }

    // Candidate slot-spans for the module, leftmost first; empty if the
    // module does not fit this region.
    std::vector<RegionSpan> placements(const std::string& module) const {
        auto it = slots_required_.find(module);
        if (it == slots_required_.end())
            throw UnknownModule("'" + module + "' not in plan for region " + region_.name);
        std::vector<RegionSpan> out;
        int k = it->second;
        if (k <= 0) return out;
        for (int s = 0; s + k <= slot_count(); ++s) {
            RegionSpan span = base_slots_[s];
            span.col_count = base_slots_[s + k - 1].col_start +
                             base_slots_[s + k - 1].col_count - span.col_start;
            out.push_back(span);
        }
        return out;
    }

private:
    PRRegion region_;
    std::vector<RegionSpan> base_slots_;
    std::map<std::string, int> slots_required_; // <=0 marks infeasible
};

namespace detail {

inline bool periodic(const std::vector<ResourceType>& sig, int period) {
    if (int(sig.size()) % period != 0) return false;
    for (size_t i = period; i < sig.size(); ++i)
        if (sig[i] != sig[i - period]) return false;
    return true;
}

// Slots needed so k periods cover the requirement; 0 when no count of
// periods can (a type the module needs is absent from the pattern).
inline int slots_needed(const TypeCounts& per_slot, const ModuleRequirement& req) {
    int k = 1;
    auto need = [&](int w, int n) {
        if (w == 0) return 1;
        if (n == 0) return 0;
        return (w + n - 1) / n;
    };
    int kc = need(req.w_clb, per_slot.clb);
    int kb = need(req.w_bram, per_slot.bram);
    int kd = need(req.w_dsp, per_slot.dsp);
    if (kc == 0 || kb == 0 || kd == 0) return 0;
    return std::max({k, kc, kb, kd});
}

} // namespace detail

// Tiles the region into equal pattern-aligned slots sized by the smallest
// requirement, assigning each module the minimal contiguous slot count.
// Among candidate slot sizes the aggregate frame-utilization rate is
// maximized, ties broken toward more (smaller) slots.
inline PartitionPlan partition_region(const DeviceGeometry& geom, const PRRegion& region,
                                      const std::vector<ModuleRequirement>& reqs) {
    if (reqs.empty()) throw InfeasibleRequirement("no module requirements given");
    auto sig = column_signature(geom, region.span);
    const ModuleRequirement& smallest =
        *std::min_element(reqs.begin(), reqs.end(),
                          [](const auto& a, const auto& b) { return a.total() < b.total(); });

    struct Candidate {
        int slots;
        int period;
        TypeCounts per_slot;
        std::map<std::string, int> required;
        long long w_sum, n_sum;
    };
    std::optional<Candidate> best;

    int width = region.span.col_count;
    for (int slots = width; slots >= 1; --slots) {
        if (width % slots != 0) continue;
        int period = width / slots;
        if (!detail::periodic(sig, period)) continue;
        TypeCounts per_slot = count_types({sig.begin(), sig.begin() + period});
        if (!covers(per_slot, smallest)) continue;

        Candidate cand{slots, period, per_slot, {}, 0, 0};
        for (const auto& req : reqs) {
            int k = detail::slots_needed(per_slot, req);
            if (k == 0 || k > slots || !covers(per_slot * k, req)) {
                cand.required[req.name] = 0;
                continue;
            }
            cand.required[req.name] = k;
            cand.w_sum += req.total();
            cand.n_sum += int64_t(k) * period;
        }
        if (cand.n_sum == 0) continue;
        // Maximize Ra; on ties the earlier (more slots) candidate wins.
        if (!best || cand.w_sum * best->n_sum > best->w_sum * cand.n_sum) best = cand;
    }
    if (!best) {
        // Distinguish "pattern not periodic" from "nothing fits".
        bool any_periodic = false;
        for (int slots = width; slots >= 1; --slots)
            if (width % slots == 0 && detail::periodic(sig, width / slots)) any_periodic = true;
        if (!any_periodic) throw NonTilable("region " + region.name);
        throw InfeasibleRequirement("no module fits region " + region.name);
    }

    std::vector<RegionSpan> slots;
    for (int s = 0; s < best->slots; ++s) {
        RegionSpan span = region.span;
        span.col_start = region.span.col_start + s * best->period;
        span.col_count = best->period;
        slots.push_back(span);
    }
    return PartitionPlan(region, std::move(slots), std::move(best->required));
}

// All candidate placements of a module across regions, in region order.
inline std::vector<RegionSpan> enumerate_locations(const std::vector<PartitionPlan>& plans,
                                                   const std::string& module) {
    std::vector<RegionSpan> out;
    bool known = false;
    for (const auto& plan : plans) {
        try {
            auto spans = plan.placements(module);
            known = true;
            out.insert(out.end(), spans.begin(), spans.end());
        } catch (const UnknownModule&) {
        }
    }
    if (!known) throw UnknownModule("'" + module + "' not present in any plan");
    return out;
}

// Eq. 8: transfer time of a bitstream through the configuration port.
inline double reconfiguration_time_ms(size_t size_bytes, long long clock_hz,
                                      int bus_width_bits) {
    if (bus_width_bits != 8 && bus_width_bits != 16 && bus_width_bits != 32)
        throw InvalidBusWidth(std::to_string(bus_width_bits) + " bits");
    if (clock_hz <= 0) throw ConfigError("clock_hz must be positive");
    double bytes_per_s = double(clock_hz) * (bus_width_bits / 8.0);
    return double(size_bytes) / bytes_per_s * 1000.0;
}

struct MemoryFootprint {
    int count_without = 0;
    size_t total_without = 0;
    int count_with = 1;
    size_t total_with = 0;
    double saving = 0.0; // 1 - 1/location_count
};

inline MemoryFootprint memory_footprint(int location_count, size_t per_location_size) {
    if (location_count < 1) throw InfeasibleRequirement("location_count must be >= 1");
    MemoryFootprint f;
    f.count_without = location_count;
    f.total_without = per_location_size * size_t(location_count);
    f.count_with = 1;
    f.total_with = per_location_size;
    f.saving = 1.0 - 1.0 / double(location_count);
    return f;
}

} // namespace prman::floorplan

#endif
