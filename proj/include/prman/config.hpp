#ifndef PRMAN_CONFIG_HPP
#define PRMAN_CONFIG_HPP

#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "prman/errors.hpp"
#include "prman/fabric.hpp"
#include "prman/floorplan.hpp"
#include "prman/relocate.hpp"
#include "prman/simrt.hpp"

// One JSON config describes the device, regions, module requirements, size
// model, port and (optionally) the interface map and a simulation scenario.

namespace prman::config {

struct ModuleSpec {
    floorplan::ModuleRequirement requirement;
    std::optional<size_t> size_bytes; // explicit bitstream size override
};

// Published percentages to compare report cells against; mismatching cells
// get flagged in the utilization report.
struct UtilizationReference {
    std::string region;
    std::string module;
    std::optional<int> ra_clb_without, ra_bram_without, ra_t_without;
    std::optional<int> ra_clb_with, ra_bram_with, ra_t_with;
};

struct ProjectConfig {
    fabric::DeviceGeometry geometry{1, 0, {fabric::ResourceType::CLB}};
    std::vector<floorplan::PRRegion> regions;
    std::vector<ModuleSpec> modules;
    bitstream::SizeModel size_model;
    std::map<std::string, size_t> region_size_override;
    simrt::PortConfig port;
    std::optional<double> threshold_alpha;
    relocate::InterfaceMap interface;
    std::vector<simrt::Request> requests;
    std::vector<UtilizationReference> utilization_reference;
    std::vector<std::string> unplaceable; // modules fitting no region

    std::vector<floorplan::ModuleRequirement> requirements() const {
        std::vector<floorplan::ModuleRequirement> out;
        for (const auto& m : modules) out.push_back(m.requirement);
        return out;
    }

    std::optional<size_t> size_override(const std::string& name) const {
        for (const auto& m : modules)
            if (m.requirement.name == name) return m.size_bytes;
        throw UnknownModule("'" + name + "'");
    }
};

// "CLB:9,BRAM:2,..." run-length column list.
inline std::vector<fabric::ResourceType> parse_columns(const std::string& spec) {
    std::vector<fabric::ResourceType> out;
    size_t pos = 0;
    while (pos < spec.size()) {
        size_t comma = spec.find(',', pos);
        std::string item = spec.substr(pos, comma == std::string::npos ? comma : comma - pos);
        size_t colon = item.find(':');
        if (colon == std::string::npos)
            throw ConfigError("column entry '" + item + "' missing ':count'");
        auto type = fabric::resource_type_from_string(item.substr(0, colon));
        int count = std::stoi(item.substr(colon + 1));
        if (count < 1) throw ConfigError("column count must be >= 1 in '" + item + "'");
        out.insert(out.end(), count, type);
        pos = comma == std::string::npos ? spec.size() : comma + 1;
    }
    if (out.empty()) throw ConfigError("empty column list");
    return out;
}

namespace detail {

inline fabric::Half parse_half(const std::string& s) {
    if (s == "top") return fabric::Half::Top;
    if (s == "bottom") return fabric::Half::Bottom;
    throw ConfigError("half must be 'top' or 'bottom', got '" + s + "'");
}

inline fabric::RegionSpan parse_span(const nlohmann::json& j) {
    fabric::RegionSpan span;
    span.half = parse_half(j.value("half", "top"));
    span.row = j.value("row", 0);
    span.col_start = j.at("col_start").get<int>();
    span.col_count = j.at("col_count").get<int>();
    return span;
}

} // namespace detail

inline ProjectConfig load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }

    try {
        ProjectConfig cfg;
        const auto& jg = j.at("geometry");
        cfg.geometry = fabric::DeviceGeometry(
            jg.value("rows_top", 1), jg.value("rows_bottom", 0),
            parse_columns(jg.at("columns").get<std::string>()));

        for (const auto& jr : j.value("regions", nlohmann::json::array())) {
            floorplan::PRRegion r;
            r.name = jr.at("name").get<std::string>();
            r.span = detail::parse_span(jr);
            cfg.geometry.validate_span(r.span);
            cfg.regions.push_back(r);
            if (jr.contains("size_bytes"))
                cfg.region_size_override[r.name] = jr.at("size_bytes").get<size_t>();
        }

        for (const auto& jm : j.value("modules", nlohmann::json::array())) {
            ModuleSpec m;
            m.requirement.name = jm.at("name").get<std::string>();
            m.requirement.w_clb = jm.value("clb", 0);
            m.requirement.w_bram = jm.value("bram", 0);
            m.requirement.w_dsp = jm.value("dsp", 0);
            if (m.requirement.total() <= 0)
                throw ConfigError("module '" + m.requirement.name + "' requires nothing");
            if (jm.contains("size_bytes")) m.size_bytes = jm.at("size_bytes").get<size_t>();
            cfg.modules.push_back(m);
        }

        if (j.contains("size_model")) {
            cfg.size_model.overhead_words = j["size_model"].value("overhead_words", 0);
            cfg.size_model.content_words_per_bram_column =
                j["size_model"].value("content_words_per_bram_column", 0);
        }
        if (j.contains("port")) {
            cfg.port.clock_hz = j["port"].value("clock_hz", 100'000'000LL);
            cfg.port.bus_width_bits = j["port"].value("bus_width_bits", 32);
        }
        if (j.contains("threshold_alpha") && !j["threshold_alpha"].is_null())
            cfg.threshold_alpha = j["threshold_alpha"].get<double>();

        if (j.contains("interface")) {
            for (const auto& jp : j["interface"].value("pins", nlohmann::json::array())) {
                relocate::PinAnchor p;
                p.signal_name = jp.at("signal").get<std::string>();
                p.rel_col = jp.value("rel_col", 0);
                p.bel_index = jp.value("bel", 0);
                p.direction = jp.value("dir", "in") == "out" ? relocate::PinDirection::Out
                                                             : relocate::PinDirection::In;
                cfg.interface.pins.push_back(p);
            }
            for (const auto& jr : j["interface"].value("routes", nlohmann::json::array())) {
                relocate::RouteAnchor r;
                r.signal_name = jr.at("signal").get<std::string>();
                for (const auto& js : jr.value("segments", nlohmann::json::array()))
                    r.segments.push_back({js.at(0).get<int>(), js.at(1).get<int>(),
                                          js.at(2).get<int>()});
                cfg.interface.routes.push_back(r);
            }
        }

        if (j.contains("reference")) {
            auto opt = [](const nlohmann::json& jj, const char* key) -> std::optional<int> {
                if (!jj.contains(key) || jj[key].is_null()) return {};
                return jj[key].get<int>();
            };
            for (const auto& jr : j["reference"].value("utilization", nlohmann::json::array())) {
                UtilizationReference ref;
                ref.region = jr.at("region").get<std::string>();
                ref.module = jr.at("module").get<std::string>();
                ref.ra_clb_without = opt(jr, "ra_clb_without");
                ref.ra_bram_without = opt(jr, "ra_bram_without");
                ref.ra_t_without = opt(jr, "ra_t_without");
                ref.ra_clb_with = opt(jr, "ra_clb_with");
                ref.ra_bram_with = opt(jr, "ra_bram_with");
                ref.ra_t_with = opt(jr, "ra_t_with");
                cfg.utilization_reference.push_back(ref);
            }
        }

        if (j.contains("scenario")) {
            for (const auto& jr : j["scenario"].value("requests", nlohmann::json::array())) {
                simrt::Request r;
                r.time_ms = jr.at("time_ms").get<double>();
                r.module = jr.at("module").get<std::string>();
                r.run_duration_ms = jr.value("run_ms", 0.0);
                if (jr.contains("predict") && !jr["predict"].is_null())
                    r.predicted_next = jr.at("predict").get<std::string>();
                cfg.requests.push_back(r);
            }
            for (size_t i = 1; i < cfg.requests.size(); ++i)
                if (cfg.requests[i].time_ms < cfg.requests[i - 1].time_ms)
                    throw ConfigError("scenario request times must be non-decreasing");
        }

        // Cross-references: scenario modules must exist, every module fits at
        // least one region or gets flagged.
        for (const auto& r : cfg.requests) cfg.size_override(r.module);
        for (const auto& m : cfg.modules) {
            bool fits = false;
            for (const auto& region : cfg.regions) {
                auto counts = region.counts(cfg.geometry);
                if (floorplan::covers(counts, m.requirement)) fits = true;
            }
            if (!fits) cfg.unplaceable.push_back(m.requirement.name);
        }
        return cfg;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

// Partition every region for the configured module set.
inline std::vector<floorplan::PartitionPlan> build_plans(const ProjectConfig& cfg) {
    std::vector<floorplan::PartitionPlan> plans;
    for (const auto& region : cfg.regions)
        plans.push_back(floorplan::partition_region(cfg.geometry, region, cfg.requirements()));
    return plans;
}

inline simrt::Scenario build_scenario(const ProjectConfig& cfg) {
    simrt::Scenario sc;
    sc.geom = cfg.geometry;
    sc.plans = build_plans(cfg);
    sc.modules = cfg.requirements();
    sc.size_model = cfg.size_model;
    for (const auto& m : cfg.modules)
        if (m.size_bytes) sc.module_size_override[m.requirement.name] = *m.size_bytes;
    sc.region_size_override = cfg.region_size_override;
    sc.port = cfg.port;
    sc.requests = cfg.requests;
    return sc;
}

} // namespace prman::config

#endif
