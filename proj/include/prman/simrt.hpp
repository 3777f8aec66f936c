#ifndef PRMAN_SIMRT_HPP
#define PRMAN_SIMRT_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "prman/bitstream.hpp"
#include "prman/errors.hpp"
#include "prman/fabric.hpp"
#include "prman/floorplan.hpp"

// Deterministic discrete-event simulator of runtime reconfiguration over a
// single serialized configuration port, with three policies: whole-region
// reloads, partition-sized reloads, and partition-sized reloads plus
// predictive preloading into free slots.

namespace prman::simrt {

using fabric::RegionSpan;

enum class Policy { Baseline, Adaptive, AdaptivePreload };

inline const char* to_string(Policy p) {
    switch (p) {
    case Policy::Baseline: return "baseline";
    case Policy::Adaptive: return "adaptive";
    case Policy::AdaptivePreload: return "preload";
    }
    return "?";
}

struct PortConfig {
    long long clock_hz = 100'000'000;
    int bus_width_bits = 32;
};

struct Request {
    double time_ms = 0;
    std::string module;
    double run_duration_ms = 0;
    std::optional<std::string> predicted_next;
};

struct Scenario {
    fabric::DeviceGeometry geom{1, 0, {fabric::ResourceType::CLB}};
    std::vector<floorplan::PartitionPlan> plans;
    std::vector<floorplan::ModuleRequirement> modules;
    bitstream::SizeModel size_model;
    std::map<std::string, size_t> module_size_override;  // bytes
    std::map<std::string, size_t> region_size_override;  // bytes, by region name
    PortConfig port;
    std::vector<Request> requests;

    const floorplan::ModuleRequirement& module_req(const std::string& name) const {
        for (const auto& m : modules)
            if (m.name == name) return m;
        throw UnknownModule("'" + name + "'");
    }

    size_t module_size(const std::string& name, const RegionSpan& span) const {
        auto it = module_size_override.find(name);
        if (it != module_size_override.end()) return it->second;
        return size_model.size_bytes(geom, span);
    }

    size_t region_size(const floorplan::PartitionPlan& plan) const {
        auto it = region_size_override.find(plan.region().name);
        if (it != region_size_override.end()) return it->second;
        return size_model.size_bytes(geom, plan.region().span);
    }
};

enum class EventKind {
    RequestArrival,
    ReconfigStart,
    ReconfigEnd,
    ComputeStart,
    ComputeEnd,
    Eviction,
    PreloadStart,
    PreloadEnd,
    PreloadHit,
    PredictorSlotConflict,
};

inline const char* to_string(EventKind k) {
    switch (k) {
    case EventKind::RequestArrival: return "RequestArrival";
    case EventKind::ReconfigStart: return "ReconfigStart";
    case EventKind::ReconfigEnd: return "ReconfigEnd";
    case EventKind::ComputeStart: return "ComputeStart";
    case EventKind::ComputeEnd: return "ComputeEnd";
    case EventKind::Eviction: return "Eviction";
    case EventKind::PreloadStart: return "PreloadStart";
    case EventKind::PreloadEnd: return "PreloadEnd";
    case EventKind::PreloadHit: return "PreloadHit";
    case EventKind::PredictorSlotConflict: return "PredictorSlotConflict";
    }
    return "?";
}

struct Event {
    double time_ms = 0;
    EventKind kind;
    std::string module;
    RegionSpan span;
};

struct SimulationReport {
    std::vector<Event> events;
    std::vector<double> exposed_delay_ms; // per request
    double total_exposed_ms = 0;
    double total_masked_ms = 0;
    double total_compute_ms = 0;
    double mean_occupied_ratio = 0; // time-weighted required/total columns
};

namespace detail {

struct Resident {
    std::string module;
    RegionSpan span;
    double ready_ms = 0;  // load completion
    double loaded_ms = 0; // occupancy start, for the utilization integral
    bool activated = false; // served a request (false = speculative preload)
};

inline bool spans_overlap(const RegionSpan& a, const RegionSpan& b) {
    return a.half == b.half && a.row == b.row &&
           a.col_start < b.col_start + b.col_count &&
           b.col_start < a.col_start + a.col_count;
}

class Timeline {
public:
    explicit Timeline(const Scenario& sc, Policy policy) : sc_(sc), policy_(policy) {
        for (const auto& plan : sc.plans)
            total_columns_ += plan.region().span.col_count;
    }

    SimulationReport run() {
        for (const auto& req : sc_.requests) handle_request(req);
        finish();
        return std::move(report_);
    }

private:
    // Candidate spans for a module, lowest-indexed first. Baseline places
    // whole regions; the adaptive policies place slot-spans.
    std::vector<RegionSpan> candidates(const std::string& module) const {
        std::vector<RegionSpan> out;
        for (const auto& plan : sc_.plans) {
            if (!plan.feasible(module)) continue;
            if (policy_ == Policy::Baseline)
                out.push_back(plan.region().span);
            else {
                auto spans = plan.placements(module);
                out.insert(out.end(), spans.begin(), spans.end());
            }
        }
        return out;
    }

    bool span_free(const RegionSpan& span) const {
        return std::none_of(residents_.begin(), residents_.end(),
                            [&](const Resident& r) { return spans_overlap(r.span, span); });
    }

    Resident* find_resident(const std::string& module) {
        for (auto& r : residents_)
            if (r.module == module) return &r;
        return nullptr;
    }

    // True if every resident overlapping the span is a speculative preload.
    bool only_speculative(const RegionSpan& span) const {
        return std::all_of(residents_.begin(), residents_.end(), [&](const Resident& r) {
            return !spans_overlap(r.span, span) || !r.activated;
        });
    }

    size_t load_size(const std::string& module, const RegionSpan& span) const {
        if (policy_ == Policy::Baseline) {
            for (const auto& plan : sc_.plans)
                if (plan.region().span == span) return sc_.region_size(plan);
        }
        return sc_.module_size(module, span);
    }

    void evict_overlapping(const RegionSpan& span, double now) {
        for (auto it = residents_.begin(); it != residents_.end();) {
            if (spans_overlap(it->span, span)) {
                occupancy_end(*it, now);
                report_.events.push_back({now, EventKind::Eviction, it->module, it->span});
                it = residents_.erase(it);
            } else {
                ++it;
            }
        }
    }

    void occupancy_end(const Resident& r, double now) {
        int cols = sc_.module_req(r.module).total();
        if (now > r.loaded_ms)
            occupied_integral_ += double(cols) * (now - r.loaded_ms);
    }

    // One load on the serialized port; returns (start, end).
    std::pair<double, double> port_transfer(double earliest, size_t bytes) {
        double start = std::max(earliest, port_free_ms_);
        double dur = floorplan::reconfiguration_time_ms(bytes, sc_.port.clock_hz,
                                                        sc_.port.bus_width_bits);
        port_free_ms_ = start + dur;
        return {start, port_free_ms_};
    }

    void handle_request(const Request& req) {
        sc_.module_req(req.module); // UnknownModule before anything else
        double t = req.time_ms;
        report_.events.push_back({t, EventKind::RequestArrival, req.module, {}});

        double compute_start;
        double exposed = 0;
        if (Resident* r = find_resident(req.module)) {
            // Already loaded (earlier activation or a preload that held).
            r->activated = true;
            compute_start = std::max(t, r->ready_ms);
            report_.events.push_back({compute_start, EventKind::PreloadHit, req.module, r->span});
        } else {
            auto cands = candidates(req.module);
            if (cands.empty())
                throw InfeasibleRequest("'" + req.module + "' fits no region");
            const RegionSpan* chosen = nullptr;
            for (const auto& c : cands)
                if (span_free(c)) { chosen = &c; break; }
            if (!chosen) // evict speculative preloads first, else the lowest-indexed span
                for (const auto& c : cands)
                    if (only_speculative(c)) { chosen = &c; break; }
            if (!chosen) chosen = &cands.front();

            size_t bytes = load_size(req.module, *chosen);
            auto [start, end] = port_transfer(t, bytes);
            evict_overlapping(*chosen, start);
            report_.events.push_back({start, EventKind::ReconfigStart, req.module, *chosen});
            report_.events.push_back({end, EventKind::ReconfigEnd, req.module, *chosen});
            exposed = end - start;
            residents_.push_back({req.module, *chosen, end, end, true});
            compute_start = end;
        }
        report_.exposed_delay_ms.push_back(exposed);
        report_.total_exposed_ms += exposed;

        double compute_end = compute_start + req.run_duration_ms;
        RegionSpan at = find_resident(req.module)->span;
        report_.events.push_back({compute_start, EventKind::ComputeStart, req.module, at});
        report_.events.push_back({compute_end, EventKind::ComputeEnd, req.module, at});
        report_.total_compute_ms += req.run_duration_ms;
        end_ms_ = std::max(end_ms_, compute_end);

        if (policy_ == Policy::AdaptivePreload && req.predicted_next)
            preload(*req.predicted_next, compute_start);
    }

    void preload(const std::string& module, double now) {
        if (find_resident(module)) return; // nothing to mask
        auto cands = candidates(module);
        if (cands.empty()) return;
        const RegionSpan* chosen = nullptr;
        for (const auto& c : cands)
            if (span_free(c)) { chosen = &c; break; }
        if (!chosen) {
            report_.events.push_back({now, EventKind::PredictorSlotConflict, module, {}});
            return;
        }
        size_t bytes = load_size(module, *chosen);
        auto [start, end] = port_transfer(now, bytes);
        report_.events.push_back({start, EventKind::PreloadStart, module, *chosen});
        report_.events.push_back({end, EventKind::PreloadEnd, module, *chosen});
        report_.total_masked_ms += end - start;
        residents_.push_back({module, *chosen, end, end, false});
        end_ms_ = std::max(end_ms_, end);
    }

    void finish() {
        for (const auto& r : residents_) occupancy_end(r, end_ms_);
        residents_.clear();
        std::stable_sort(report_.events.begin(), report_.events.end(),
                         [](const Event& a, const Event& b) { return a.time_ms < b.time_ms; });
        double t0 = sc_.requests.empty() ? 0 : sc_.requests.front().time_ms;
        double span = end_ms_ - t0;
        report_.mean_occupied_ratio =
            (span > 0 && total_columns_ > 0)
                ? occupied_integral_ / (span * double(total_columns_))
                : 0.0;
    }

    const Scenario& sc_;
    Policy policy_;
    std::vector<Resident> residents_;
    double port_free_ms_ = 0;
    double end_ms_ = 0;
    double occupied_integral_ = 0;
    int total_columns_ = 0;
    SimulationReport report_;
};

} // namespace detail

inline SimulationReport run(const Scenario& scenario, Policy policy) {
    return detail::Timeline(scenario, policy).run();
}

struct PolicyComparison {
    struct PerVersion {
        std::string module;
        double baseline_ms = 0;
        double adaptive_ms = 0;
        floorplan::Ratio gain; // 1 - adaptive/baseline, from exact sizes
    };
    std::vector<PerVersion> versions;
    SimulationReport baseline;
    SimulationReport adaptive;
    SimulationReport preload;
};

// Side-by-side per-version switch costs and full-timeline totals.
inline PolicyComparison compare_policies(const Scenario& scenario) {
    PolicyComparison cmp;
    cmp.baseline = run(scenario, Policy::Baseline);
    cmp.adaptive = run(scenario, Policy::Adaptive);
    cmp.preload = run(scenario, Policy::AdaptivePreload);

    for (const auto& m : scenario.modules) {
        for (const auto& plan : scenario.plans) {
            if (!plan.feasible(m.name)) continue;
            PolicyComparison::PerVersion v;
            v.module = m.name;
            size_t region_bytes = scenario.region_size(plan);
            size_t module_bytes = scenario.module_size(m.name, plan.placements(m.name).front());
            v.baseline_ms = floorplan::reconfiguration_time_ms(
                region_bytes, scenario.port.clock_hz, scenario.port.bus_width_bits);
            v.adaptive_ms = floorplan::reconfiguration_time_ms(
                module_bytes, scenario.port.clock_hz, scenario.port.bus_width_bits);
            v.gain = floorplan::Ratio{(long long)(region_bytes - module_bytes),
                                      (long long)region_bytes};
            cmp.versions.push_back(v);
            break; // first hosting region defines the Table-6 style row
        }
    }
    return cmp;
}

} // namespace prman::simrt

#endif
