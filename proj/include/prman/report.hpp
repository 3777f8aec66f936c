#ifndef PRMAN_REPORT_HPP
#define PRMAN_REPORT_HPP

#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "prman/config.hpp"
#include "prman/floorplan.hpp"

// Utilization, memory and reconfiguration-time summaries over a project
// config, rendered as aligned text or CSV. Per-type rates are rounded to the
// nearest percent; total rates and gains are truncated.

namespace prman::report {

inline int percent_per_type(const floorplan::Ratio& r) { return r.percent_nearest(); }
inline int percent_total(const floorplan::Ratio& r) { return r.percent_floor(); }

struct UtilizationRow {
    std::string region;
    std::string module;
    bool feasible = false;
    floorplan::MetricSet whole_region; // without adaptation
    floorplan::MetricSet adapted;      // k assigned slots
    int free_partitions = 0;
    std::string note; // set when a cell disagrees with a configured reference
};

inline std::vector<UtilizationRow> utilization_rows(const config::ProjectConfig& cfg,
                                                    const std::vector<floorplan::PartitionPlan>& plans) {
    std::vector<UtilizationRow> rows;
    for (const auto& plan : plans) {
        auto region_counts = plan.region().counts(cfg.geometry);
        for (const auto& m : cfg.requirements()) {
            UtilizationRow row;
            row.region = plan.region().name;
            row.module = m.name;
            if (!floorplan::covers(region_counts, m)) {
                rows.push_back(row);
                continue;
            }
            row.feasible = true;
            row.whole_region = floorplan::utilization(m, region_counts);
            int k = plan.slots_required(m.name);
            auto slot_counts = floorplan::count_types(
                column_signature(cfg.geometry, plan.placements(m.name).front()));
            row.adapted = floorplan::utilization(m, slot_counts);
            row.free_partitions = plan.slot_count() - k;
            rows.push_back(row);
        }
    }
    return rows;
}

struct MemoryRow {
    std::string module;
    int locations = 0;
    size_t size_bytes = 0;
    floorplan::MemoryFootprint footprint;
};

inline std::vector<MemoryRow> memory_rows(const config::ProjectConfig& cfg,
                                          const std::vector<floorplan::PartitionPlan>& plans) {
    std::vector<MemoryRow> rows;
    for (const auto& m : cfg.modules) {
        MemoryRow row;
        row.module = m.requirement.name;
        auto locations = floorplan::enumerate_locations(plans, m.requirement.name);
        row.locations = static_cast<int>(locations.size());
        if (row.locations == 0) continue;
        row.size_bytes = m.size_bytes
                             ? *m.size_bytes
                             : cfg.size_model.size_bytes(cfg.geometry, locations.front());
        row.footprint = floorplan::memory_footprint(row.locations, row.size_bytes);
        rows.push_back(row);
    }
    return rows;
}

struct TimeRow {
    std::string module;
    double baseline_ms = 0;
    double adaptive_ms = 0;
    floorplan::Ratio gain;
};

inline std::vector<TimeRow> time_rows(const config::ProjectConfig& cfg,
                                      const std::vector<floorplan::PartitionPlan>& plans) {
    std::vector<TimeRow> rows;
    for (const auto& m : cfg.modules) {
        for (const auto& plan : plans) {
            if (!plan.feasible(m.requirement.name)) continue;
            TimeRow row;
            row.module = m.requirement.name;
            size_t region_bytes = cfg.region_size_override.count(plan.region().name)
                                      ? cfg.region_size_override.at(plan.region().name)
                                      : cfg.size_model.size_bytes(cfg.geometry, plan.region().span);
            size_t module_bytes =
                m.size_bytes ? *m.size_bytes
                             : cfg.size_model.size_bytes(
                                   cfg.geometry, plan.placements(m.requirement.name).front());
            row.baseline_ms = floorplan::reconfiguration_time_ms(region_bytes, cfg.port.clock_hz,
                                                                 cfg.port.bus_width_bits);
            row.adaptive_ms = floorplan::reconfiguration_time_ms(module_bytes, cfg.port.clock_hz,
                                                                 cfg.port.bus_width_bits);
            row.gain = floorplan::Ratio{(long long)(region_bytes - module_bytes),
                                        (long long)region_bytes};
            rows.push_back(row);
            break;
        }
    }
    return rows;
}

// Marks rows whose computed cells disagree with the reference table
// supplied alongside the config.
inline void apply_reference(std::vector<UtilizationRow>& rows,
                            const std::vector<config::UtilizationReference>& refs) {
    auto type_pct = [](const floorplan::MetricSet& m, fabric::ResourceType t) -> std::optional<int> {
        auto it = m.ra_per_type.find(t);
        if (it == m.ra_per_type.end()) return {};
        return percent_per_type(it->second);
    };
    for (auto& row : rows) {
        if (!row.feasible) continue;
        for (const auto& ref : refs) {
            if (ref.region != row.region || ref.module != row.module) continue;
            auto check = [&](const char* cell, std::optional<int> expected,
                             std::optional<int> got) {
                if (expected && got && *expected != *got) {
                    if (!row.note.empty()) row.note += "; ";
                    row.note += std::string(cell) + " computed " + std::to_string(*got) +
                                "% vs reference " + std::to_string(*expected) +
                                "% (documented inconsistency)";
                }
            };
            using RT = fabric::ResourceType;
            check("ra_clb_without", ref.ra_clb_without, type_pct(row.whole_region, RT::CLB));
            check("ra_bram_without", ref.ra_bram_without, type_pct(row.whole_region, RT::BRAM));
            check("ra_t_without", ref.ra_t_without, percent_total(row.whole_region.ra_total));
            check("ra_clb_with", ref.ra_clb_with, type_pct(row.adapted, RT::CLB));
            check("ra_bram_with", ref.ra_bram_with, type_pct(row.adapted, RT::BRAM));
            check("ra_t_with", ref.ra_t_with, percent_total(row.adapted.ra_total));
        }
    }
}

namespace detail {

inline std::string pct(const std::optional<int>& v) {
    return v ? std::to_string(*v) + "%" : "-";
}

inline std::optional<int> type_pct(const floorplan::MetricSet& m, fabric::ResourceType t) {
    auto it = m.ra_per_type.find(t);
    if (it == m.ra_per_type.end()) return {};
    return percent_per_type(it->second);
}

inline std::string fixed2(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(2) << v;
    return os.str();
}

// Pads each column to its widest cell.
inline std::string align(const std::vector<std::vector<std::string>>& rows) {
    std::vector<size_t> width;
    for (const auto& r : rows)
        for (size_t c = 0; c < r.size(); ++c) {
            if (c >= width.size()) width.push_back(0);
            width[c] = std::max(width[c], r[c].size());
        }
    std::ostringstream os;
    for (const auto& r : rows) {
        for (size_t c = 0; c < r.size(); ++c)
            os << std::left << std::setw(int(width[c]) + 2) << r[c];
        os << "\n";
    }
    return os.str();
}

} // namespace detail

inline std::string render_utilization(const std::vector<UtilizationRow>& rows, bool csv) {
    using RT = fabric::ResourceType;
    std::vector<std::vector<std::string>> cells;
    cells.push_back({"region", "module", "ra_clb_without", "ra_bram_without", "ra_t_without",
                     "ra_clb_with", "ra_bram_with", "ra_t_with", "free_partitions", "note"});
    for (const auto& r : rows) {
        if (!r.feasible) {
            cells.push_back({r.region, r.module, "-", "-", "-", "-", "-", "-", "-", "infeasible"});
            continue;
        }
        cells.push_back({r.region, r.module,
                         detail::pct(detail::type_pct(r.whole_region, RT::CLB)),
                         detail::pct(detail::type_pct(r.whole_region, RT::BRAM)),
                         detail::pct(percent_total(r.whole_region.ra_total)),
                         detail::pct(detail::type_pct(r.adapted, RT::CLB)),
                         detail::pct(detail::type_pct(r.adapted, RT::BRAM)),
                         detail::pct(percent_total(r.adapted.ra_total)),
                         std::to_string(r.free_partitions), r.note});
    }
    if (!csv) return detail::align(cells);
    std::string out = "#schema=utilization.v1\n";
    for (const auto& row : cells) {
        for (size_t c = 0; c < row.size(); ++c)
            out += (c ? "," : "") + row[c];
        out += "\n";
    }
    return out;
}

inline std::string render_memory(const std::vector<MemoryRow>& rows, bool csv) {
    std::vector<std::vector<std::string>> cells;
    cells.push_back({"module", "locations", "size_bytes", "total_without_bytes",
                     "total_with_bytes", "saving_pct"});
    for (const auto& r : rows) {
        std::ostringstream saving;
        saving << r.footprint.saving * 100.0;
        cells.push_back({r.module, std::to_string(r.locations), std::to_string(r.size_bytes),
                         std::to_string(r.footprint.total_without),
                         std::to_string(r.footprint.total_with), saving.str()});
    }
    if (!csv) return detail::align(cells);
    std::string out = "#schema=memory.v1\n";
    for (const auto& row : cells) {
        for (size_t c = 0; c < row.size(); ++c)
            out += (c ? "," : "") + row[c];
        out += "\n";
    }
    return out;
}

inline std::string render_times(const std::vector<TimeRow>& rows, bool csv) {
    std::vector<std::vector<std::string>> cells;
    cells.push_back({"module", "baseline_ms", "adaptive_ms", "gain_pct"});
    for (const auto& r : rows)
        cells.push_back({r.module, detail::fixed2(r.baseline_ms), detail::fixed2(r.adaptive_ms),
                         std::to_string(percent_total(r.gain))});
    if (!csv) return detail::align(cells);
    std::string out = "#schema=times.v1\n";
    for (const auto& row : cells) {
        for (size_t c = 0; c < row.size(); ++c)
            out += (c ? "," : "") + row[c];
        out += "\n";
    }
    return out;
}

} // namespace prman::report

#endif
