// prman - partial reconfiguration management toolkit CLI.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "prman/bitstream.hpp"
#include "prman/config.hpp"
#include "prman/csd.hpp"
#include "prman/errors.hpp"
#include "prman/fabric.hpp"
#include "prman/floorplan.hpp"
#include "prman/image_io.hpp"
#include "prman/relocate.hpp"
#include "prman/report.hpp"
#include "prman/simrt.hpp"

namespace {

using namespace prman;

std::vector<uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::vector<uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
}

std::ostream& open_out(std::ofstream& file, const std::string& out_path) {
    if (out_path.empty()) return std::cout;
    file.open(out_path);
    if (!file) throw ConfigError("cannot write " + out_path);
    return file;
}

// "REGION/INDEX" -> (region name, index)
std::pair<std::string, int> parse_location(const std::string& loc) {
    auto slash = loc.find('/');
    if (slash == std::string::npos)
        throw ConfigError("location must be REGION/SLOT, got '" + loc + "'");
    return {loc.substr(0, slash), std::stoi(loc.substr(slash + 1))};
}

const floorplan::PartitionPlan& find_plan(const std::vector<floorplan::PartitionPlan>& plans,
                                          const std::string& region) {
    for (const auto& p : plans)
        if (p.region().name == region) return p;
    throw ConfigError("unknown region '" + region + "'");
}

std::string describe_span(const fabric::RegionSpan& s) {
    std::ostringstream os;
    os << (s.half == fabric::Half::Top ? "top" : "bottom") << "/row" << s.row << "/cols["
       << s.col_start << "," << s.col_start + s.col_count << ")";
    return os.str();
}

// Target span for relocation: k contiguous base slots starting at the given
// slot index, matching the source width.
fabric::RegionSpan target_span(const floorplan::PartitionPlan& plan, int slot_index,
                               int source_cols) {
    const auto& slots = plan.base_slots();
    if (slot_index < 0 || slot_index >= int(slots.size()))
        throw ConfigError("slot index " + std::to_string(slot_index) + " out of range");
    int slot_width = slots[0].col_count;
    if (source_cols % slot_width != 0)
        throw ConfigError("source width is not a whole number of slots");
    int k = source_cols / slot_width;
    if (slot_index + k > int(slots.size()))
        throw ConfigError("span of " + std::to_string(k) + " slots does not fit at slot " +
                          std::to_string(slot_index));
    fabric::RegionSpan span = slots[slot_index];
    span.col_count = source_cols;
    return span;
}

int cmd_device_check(const config::ProjectConfig& cfg) {
    std::cout << "geometry: " << cfg.geometry.rows_top() << " top row(s), "
              << cfg.geometry.rows_bottom() << " bottom row(s), " << cfg.geometry.column_count()
              << " columns\n";
    for (const auto& r : cfg.regions) {
        auto counts = r.counts(cfg.geometry);
        std::cout << "region " << r.name << ": " << describe_span(r.span) << " (" << counts.clb
                  << " CLB, " << counts.bram << " BRAM, " << counts.dsp << " DSP)\n";
    }
    for (const auto& m : cfg.modules)
        std::cout << "module " << m.requirement.name << ": " << m.requirement.w_clb << " CLB, "
                  << m.requirement.w_bram << " BRAM, " << m.requirement.w_dsp << " DSP\n";
    if (!cfg.unplaceable.empty()) {
        std::cout << "warning: modules fitting no region:";
        for (const auto& n : cfg.unplaceable) std::cout << " " << n;
        std::cout << "\n";
    }
    std::cout << "config ok\n";
    return 0;
}

int cmd_plan(const config::ProjectConfig& cfg, std::ostream& os, bool csv) {
    auto plans = config::build_plans(cfg);
    for (const auto& plan : plans) {
        os << "region " << plan.region().name << ": " << plan.slot_count() << " slot(s) of "
           << plan.base_slots()[0].col_count << " column(s)\n";
        for (const auto& m : cfg.requirements()) {
            os << "  " << m.name << ": ";
            if (!plan.feasible(m.name)) {
                os << "infeasible\n";
                continue;
            }
            os << plan.slots_required(m.name) << " slot(s), "
               << plan.placements(m.name).size() << " placement(s)\n";
        }
    }
    os << "\n";
    auto rows = report::utilization_rows(cfg, plans);
    report::apply_reference(rows, cfg.utilization_reference);
    os << report::render_utilization(rows, csv);
    return 0;
}

int cmd_locations(const config::ProjectConfig& cfg, const std::string& module, std::ostream& os) {
    auto plans = config::build_plans(cfg);
    for (const auto& m : cfg.modules) {
        if (!module.empty() && m.requirement.name != module) continue;
        auto locations = floorplan::enumerate_locations(plans, m.requirement.name);
        os << m.requirement.name << ": " << locations.size() << " location(s)\n";
        for (const auto& span : locations) os << "  " << describe_span(span) << "\n";
    }
    return 0;
}

int cmd_bitgen(const config::ProjectConfig& cfg, const std::string& module,
               const std::string& location, uint32_t seed, const std::string& out_path) {
    auto plans = config::build_plans(cfg);
    auto [region, index] = parse_location(location);
    const auto& plan = find_plan(plans, region);
    auto placements = plan.placements(module);
    if (placements.empty()) throw InfeasibleRequirement("'" + module + "' does not fit " + region);
    if (index < 0 || index >= int(placements.size()))
        throw ConfigError("placement index " + std::to_string(index) + " out of range (" +
                          std::to_string(placements.size()) + " placements)");
    auto bs = bitstream::bitgen(cfg.geometry, placements[index], seed);
    write_file(out_path, bitstream::serialize(bs));
    std::cout << "wrote " << out_path << ": " << bitstream::total_frames(bs) << " frames at "
              << describe_span(bs.span) << "\n";
    return 0;
}

int cmd_parse(const std::string& in_path, std::ostream& os) {
    auto bs = bitstream::parse(read_file(in_path));
    os << "span: " << describe_span(bs.span) << "\n";
    for (const auto& p : bs.body) {
        if (auto* far = std::get_if<bitstream::WriteFar>(&p)) {
            auto fa = fabric::unpack_far(far->word);
            os << "FAR 0x" << std::hex << std::setw(8) << std::setfill('0') << far->word
               << std::dec << std::setfill(' ') << "  (half=" << int(fa.half)
               << " row=" << int(fa.row) << " major=" << int(fa.major)
               << " minor=" << int(fa.minor) << ")\n";
        } else if (auto* fdri = std::get_if<bitstream::WriteFdri>(&p)) {
            os << "FDRI " << fdri->words.size() / fabric::kFrameWords << " frame(s), "
               << fdri->words.size() << " words\n";
        } else if (auto* crc = std::get_if<bitstream::WriteCrc>(&p)) {
            os << "CRC 0x" << std::hex << std::setw(8) << std::setfill('0') << crc->word
               << std::dec << std::setfill(' ') << "\n";
        } else {
            os << "DESYNC\n";
        }
    }
    return 0;
}

int cmd_relocate(const config::ProjectConfig& cfg, const std::string& in_path,
                 const std::string& to, const std::string& out_path) {
    auto plans = config::build_plans(cfg);
    auto bs = bitstream::parse(read_file(in_path));
    auto [region, slot] = parse_location(to);
    const auto& plan = find_plan(plans, region);
    auto target = target_span(plan, slot, bs.span.col_count);
    auto out = relocate::relocate_bitstream(bs, cfg.geometry, target, cfg.interface);
    write_file(out_path, bitstream::serialize(out));
    std::cout << "relocated " << describe_span(bs.span) << " -> " << describe_span(out.span)
              << ", wrote " << out_path << "\n";
    return 0;
}

void print_report(const simrt::SimulationReport& rep, std::ostream& os, bool csv,
                  bool events) {
    if (csv) {
        os << "#schema=sim.v1\nrequest,exposed_ms\n";
        for (size_t i = 0; i < rep.exposed_delay_ms.size(); ++i)
            os << i << "," << rep.exposed_delay_ms[i] << "\n";
    }
    if (events) {
        for (const auto& e : rep.events)
            os << std::fixed << std::setprecision(3) << e.time_ms << " ms  "
               << simrt::to_string(e.kind) << " " << e.module << "\n";
    }
    os << std::fixed << std::setprecision(3) << "total exposed: " << rep.total_exposed_ms
       << " ms, masked: " << rep.total_masked_ms << " ms, compute: " << rep.total_compute_ms
       << " ms, mean occupancy: " << rep.mean_occupied_ratio * 100 << "%\n";
}

int cmd_simulate(const config::ProjectConfig& cfg, const std::string& policy, std::ostream& os,
                 bool csv, bool events) {
    auto scenario = config::build_scenario(cfg);
    if (policy == "all") {
        auto cmp = simrt::compare_policies(scenario);
        std::vector<report::TimeRow> rows;
        for (const auto& v : cmp.versions)
            rows.push_back({v.module, v.baseline_ms, v.adaptive_ms, v.gain});
        os << report::render_times(rows, csv);
        os << "baseline:  ";
        print_report(cmp.baseline, os, false, false);
        os << "adaptive:  ";
        print_report(cmp.adaptive, os, false, false);
        os << "preload:   ";
        print_report(cmp.preload, os, false, false);
        return 0;
    }
    simrt::Policy p;
    if (policy == "baseline") p = simrt::Policy::Baseline;
    else if (policy == "adaptive") p = simrt::Policy::Adaptive;
    else if (policy == "preload") p = simrt::Policy::AdaptivePreload;
    else throw ConfigError("unknown policy '" + policy + "'");
    print_report(simrt::run(scenario, p), os, csv, events);
    return 0;
}

int cmd_detect(const std::string& frames_dir, int levels, const std::string& mode, double alpha,
               std::ostream& os) {
    std::vector<std::string> names;
    auto frames = image_io::read_frame_directory(frames_dir, &names);
    if (frames.size() < 2) throw FrameTooSmall("need at least 2 frames in " + frames_dir);
    csd::Quantizer q;
    q.levels = levels;
    q.mode = mode == "rgb" ? csd::QuantizerMode::Rgb : csd::QuantizerMode::Gray;
    if (alpha < 0) // default: half of the maximum possible distance, 2*NP
        alpha = double(csd::num_positions(frames[0].height, frames[0].width));
    auto rep = csd::detect_cuts(frames, q, alpha);

    os << "#schema=cuts.v1\nindex,distance,is_cut\n";
    for (size_t i = 0; i < rep.distances.size(); ++i) {
        bool is_cut = std::find(rep.cuts.begin(), rep.cuts.end(), i + 1) != rep.cuts.end();
        os << i + 1 << "," << rep.distances[i] << "," << (is_cut ? 1 : 0) << "\n";
    }
    os << "# key frames:";
    for (size_t k : rep.key_frames) os << " " << names[k];
    os << "\n";
    return 0;
}

int cmd_report(const config::ProjectConfig& cfg, std::ostream& os, bool csv) {
    auto plans = config::build_plans(cfg);
    auto rows = report::utilization_rows(cfg, plans);
    report::apply_reference(rows, cfg.utilization_reference);
    os << render_memory(report::memory_rows(cfg, plans), csv) << "\n";
    os << render_utilization(rows, csv) << "\n";
    os << render_times(report::time_rows(cfg, plans), csv);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"partial reconfiguration management toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_path, format = "text";
    app.add_option("--config", config_path, "project config (JSON)");
    app.add_option("--out", out_path, "output file (default stdout)");
    app.add_option("--format", format, "csv|text")->check(CLI::IsMember({"csv", "text"}));

    auto* device = app.add_subcommand("device", "device geometry commands");
    device->add_subcommand("check", "validate the configured device and regions");

    app.add_subcommand("plan", "partition regions and report utilization");

    std::string module, location = "PRR1/0", in_path, to;
    uint32_t seed = 0;
    auto* bitgen = app.add_subcommand("bitgen", "generate a partial bitstream");
    bitgen->add_option("--module", module, "module name")->required();
    bitgen->add_option("--location", location, "REGION/PLACEMENT index");
    bitgen->add_option("--seed", seed, "payload seed");

    auto* parse = app.add_subcommand("parse", "dump packets and FARs of a bitstream");
    parse->add_option("--in", in_path, "input .prb")->required();

    auto* relocate = app.add_subcommand("relocate", "relocate a bitstream");
    relocate->add_option("--in", in_path, "input .prb")->required();
    relocate->add_option("--to", to, "target REGION/SLOT")->required();

    std::string loc_module;
    auto* locations = app.add_subcommand("locations", "list candidate locations per module");
    locations->add_option("--module", loc_module, "restrict to one module");

    std::string policy = "all";
    bool events = false;
    auto* simulate = app.add_subcommand("simulate", "run the reconfiguration simulator");
    simulate->add_option("--policy", policy, "baseline|adaptive|preload|all");
    simulate->add_flag("--events", events, "print the event timeline");

    std::string frames_dir, mode = "gray";
    int levels = 8;
    double alpha = -1;
    auto* detect = app.add_subcommand("detect", "cut detection over a frame directory");
    detect->add_option("--frames", frames_dir, "directory of .pgm/.ppm frames")->required();
    detect->add_option("--levels", levels, "quantization levels (8|16|32)")
        ->check(CLI::IsMember({8, 16, 32}));
    detect->add_option("--mode", mode, "gray|rgb")->check(CLI::IsMember({"gray", "rgb"}));
    detect->add_option("--alpha", alpha, "cut threshold (default NP, half of max distance)");

    app.add_subcommand("report", "memory, utilization and timing tables");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        bool csv = format == "csv";
        std::ofstream out_file;
        // bitgen/relocate write their binary output themselves
        auto os = [&]() -> std::ostream& { return open_out(out_file, out_path); };

        auto need_config = [&]() {
            if (config_path.empty()) throw ConfigError("--config is required");
            return config::load(config_path);
        };

        if (device->parsed()) return cmd_device_check(need_config());
        if (app.get_subcommand("plan")->parsed()) return cmd_plan(need_config(), os(), csv);
        if (bitgen->parsed()) {
            if (out_path.empty()) throw ConfigError("--out is required for bitgen");
            return cmd_bitgen(need_config(), module, location, seed, out_path);
        }
        if (parse->parsed()) return cmd_parse(in_path, os());
        if (relocate->parsed()) {
            if (out_path.empty()) throw ConfigError("--out is required for relocate");
            return cmd_relocate(need_config(), in_path, to, out_path);
        }
        if (locations->parsed()) return cmd_locations(need_config(), loc_module, os());
        if (simulate->parsed()) return cmd_simulate(need_config(), policy, os(), csv, events);
        if (detect->parsed()) return cmd_detect(frames_dir, levels, mode, alpha, os());
        if (app.get_subcommand("report")->parsed()) return cmd_report(need_config(), os(), csv);
        return 2;
    } catch (const prman::Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
