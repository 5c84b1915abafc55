// Command-line front end: scenario-driven element sweeps, lattice runs,
// the reference CNN integrator, and offline analysis of saved runs.

#include "tplcnn/analysis.hpp"
#include "tplcnn/cnn.hpp"
#include "tplcnn/event_log.hpp"
#include "tplcnn/inputs.hpp"
#include "tplcnn/locking.hpp"
#include "tplcnn/network.hpp"
#include "tplcnn/pgm.hpp"
#include "tplcnn/scenario.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace tplcnn;

namespace {

struct CommonArgs {
    std::string scenario_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    int threads = 1;
    int pixel_scale = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args)
{
    cmd->add_option("--scenario", args.scenario_path, "scenario file")->required();
    cmd->add_option("--out", args.out_dir, "output directory")->required();
    cmd->add_option("--seed", args.seed, "generator seed (stochastic mode)");
    cmd->add_option("--threads", args.threads, "worker threads (results independent of n)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--pixel-scale", args.pixel_scale,
                    "replicate each input pixel into an n x n cell block")
        ->check(CLI::PositiveNumber);
}

std::ofstream open_out(const fs::path& path)
{
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    return out;
}

std::string format_double(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

/// Axis values from either `key` (single value or comma list) or
/// `key_min`/`key_max`/`key_steps`.
std::vector<double> axis_values(const Scenario& sc, const std::string& key)
{
    if (sc.has(key)) return sc.get_list(key);
    const double lo = sc.get<double>(key + "_min");
    const double hi = sc.get<double>(key + "_max");
    const int steps = sc.get<int>(key + "_steps");
    if (steps < 1) throw ConfigError(key + "_steps must be >= 1");
    std::vector<double> vals(steps);
    for (int i = 0; i < steps; ++i) {
        vals[i] = steps > 1 ? lo + (hi - lo) * i / (steps - 1) : lo;
    }
    return vals;
}

/// Relative image paths resolve against the scenario file's directory.
GrayImage load_scaled_image(const std::string& path, const CommonArgs& args)
{
    fs::path p(path);
    if (p.is_relative()) {
        p = fs::path(args.scenario_path).parent_path() / p;
    }
    return replicate_pixels(read_pgm(p.string()), args.pixel_scale);
}

/// Rect list syntax: "r0:c0:r1:c1:value;r0:c0:r1:c1:value;..."
void paint_rect_list(RealGrid& grid, const std::string& spec)
{
    std::istringstream rects(spec);
    std::string rect;
    while (std::getline(rects, rect, ';')) {
        std::istringstream f(rect);
        std::string tok;
        std::vector<double> nums;
        while (std::getline(f, tok, ':')) nums.push_back(std::stod(tok));
        if (nums.size() != 5) throw ConfigError("rect spec needs r0:c0:r1:c1:value");
        paint_rect(grid, static_cast<int>(nums[0]), static_cast<int>(nums[1]),
                   static_cast<int>(nums[2]), static_cast<int>(nums[3]), nums[4]);
    }
}

int run_element_sweep(const CommonArgs& args)
{
    Scenario sc = Scenario::load(args.scenario_path);
    if (sc.get<std::string>("kind") != "element-sweep") {
        throw ConfigError("scenario kind is not element-sweep");
    }

    ElementParams base;
    base.resistance = sc.get_or("r", 1.0);
    base.threshold = sc.get_or("v_th", 0.5);
    base.pump_phase = sc.get_or("phi0", 0.0);
    if (sc.get_or("stochastic", 0) != 0) {
        StochasticParams st;
        st.tunnel_resistance_ratio = sc.get<double>("tunnel_resistance_ratio");
        st.temperature = sc.get<double>("temperature");
        st.rng_seed = args.seed;
        base.stochastic = st;
    }

    SweepAxes axes;
    axes.v_dc = axis_values(sc, "v_dc");
    axes.v_ac = axis_values(sc, "v_ac");
    axes.pump_period = axis_values(sc, "t_p");

    const double q0 = sc.get_or("q0", 0.0);
    const int cycles = sc.get<int>("cycles");
    const int transient = sc.get_or("transient", cycles / 4);
    const int steps_per_cycle = sc.get_or("steps_per_cycle", 256);
    LockOptions opts;
    opts.jitter_threshold = sc.get_or("jitter_threshold", 0.05);
    opts.max_code_length = sc.get_or("max_code_length", 16);
    sc.finish();

    auto table =
        sweep_lock_map(base, axes, q0, cycles, transient, args.threads, opts, steps_per_cycle);

    fs::create_directories(args.out_dir);
    auto out = open_out(fs::path(args.out_dir) / "summary.csv");
    out << "v_dc,v_ac,t_p,lock_order,phase_mean,jitter,coded_sequence,events,error\n";
    for (const SweepPoint& pt : table) {
        out << format_double(pt.v_dc) << ',' << format_double(pt.v_ac) << ','
            << format_double(pt.pump_period) << ',';
        if (pt.result.lock_order) out << *pt.result.lock_order;
        out << ',' << format_double(pt.result.phase_mean) << ','
            << format_double(pt.result.jitter) << ',';
        if (pt.result.coded_sequence) {
            bool first = true;
            for (int g : *pt.result.coded_sequence) {
                if (!first) out << '|';
                out << g;
                first = false;
            }
        }
        out << ',' << pt.result.event_count << ',';
        std::string err = pt.error_message;
        std::replace(err.begin(), err.end(), ',', ';');
        out << err << '\n';
    }
    return 0;
}

NetworkConfig network_config_from_scenario(const Scenario& sc, const CommonArgs& args)
{
    const int height = sc.get<int>("height");
    const int width = sc.get<int>("width");

    PumpParams pump;
    pump.v_ac = sc.get<double>("v_ac");
    pump.pump_period = sc.get<double>("t_p");
    pump.pump_phase = sc.get_or("phi0", 0.0);

    Boundary boundary = Boundary::open;
    const std::string bnd = sc.get_or<std::string>("boundary", "open");
    if (bnd == "open") boundary = Boundary::open;
    else if (bnd == "periodic") boundary = Boundary::periodic;
    else if (bnd == "fixed") boundary = Boundary::fixed_voltage;
    else throw ConfigError("boundary must be open, periodic or fixed");

    NetworkConfig cfg = make_uniform_network(
        height, width, sc.get<double>("bias"), sc.get<double>("coupling"), pump, boundary,
        sc.get_or("q0", 0.0), sc.get_or("r", 1.0), sc.get_or("v_th", 0.5));
    cfg.seed = args.seed;
    cfg.dt = pump.pump_period / sc.get_or("steps_per_cycle", 256);

    // Optional anisotropic coupling: uniform per-direction overrides.
    if (auto ch = sc.get_optional<double>("coupling_h")) {
        std::fill(cfg.coupling_h.begin(), cfg.coupling_h.end(), *ch);
    }
    if (auto cv = sc.get_optional<double>("coupling_v")) {
        std::fill(cfg.coupling_v.begin(), cfg.coupling_v.end(), *cv);
    }

    if (boundary == Boundary::fixed_voltage) {
        const double bv = sc.get_or("fixed_value", 0.0);
        std::fill(cfg.fixed.top.begin(), cfg.fixed.top.end(), bv);
        std::fill(cfg.fixed.bottom.begin(), cfg.fixed.bottom.end(), bv);
        std::fill(cfg.fixed.left.begin(), cfg.fixed.left.end(), bv);
        std::fill(cfg.fixed.right.begin(), cfg.fixed.right.end(), bv);
    }

    if (sc.has("bias_image")) {
        GrayImage img =
            load_scaled_image(sc.get<std::string>("bias_image"), args);
        if (img.rows() != height || img.cols() != width) {
            throw ConfigError("bias image dimensions do not match the lattice");
        }
        cfg.bias = bias_from_image(img, sc.get<double>("bias_lo"), sc.get<double>("bias_hi"));
    }
    if (sc.has("bias_rects")) {
        paint_rect_list(cfg.bias, sc.get<std::string>("bias_rects"));
    }

    if (sc.has("q0_gradient")) {
        const std::string spec = sc.get<std::string>("q0_gradient");
        std::istringstream f(spec);
        std::string qmin, qmax, axis;
        if (!std::getline(f, qmin, ':') || !std::getline(f, qmax, ':') ||
            !std::getline(f, axis)) {
            throw ConfigError("q0_gradient needs q_min:q_max:axis");
        }
        const RampAxis a = axis == "rows" ? RampAxis::rows
                         : (axis == "columns" || axis == "cols")
                             ? RampAxis::columns
                             : throw ConfigError("q0_gradient axis must be rows or columns");
        cfg.initial_charge =
            charge_gradient_init(height, width, std::stod(qmin), std::stod(qmax), a);
    }
    if (sc.has("q0_image")) {
        GrayImage img = load_scaled_image(sc.get<std::string>("q0_image"), args);
        if (img.rows() != height || img.cols() != width) {
            throw ConfigError("q0 image dimensions do not match the lattice");
        }
        cfg.initial_charge =
            image_to_values(img, sc.get<double>("q0_lo"), sc.get<double>("q0_hi"));
    }
    if (sc.has("q0_rects")) {
        paint_rect_list(cfg.initial_charge, sc.get<std::string>("q0_rects"));
    }
    return cfg;
}

std::string frame_name(int cycle)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "cycle_%06d.pgm", cycle);
    return buf;
}

int run_network_cmd(const CommonArgs& args)
{
    Scenario sc = Scenario::load(args.scenario_path);
    if (sc.get<std::string>("kind") != "network-run") {
        throw ConfigError("scenario kind is not network-run");
    }
    const int cycles = sc.get<int>("cycles");
    NetworkConfig cfg = network_config_from_scenario(sc, args);
    const int period_transient = sc.get_or("period_transient", cycles / 4);
    const int period_max = sc.get_or("period_max", 64);
    sc.finish();
    cfg.validate();

    RunRecord record = run_network(cfg, cycles);

    fs::create_directories(args.out_dir);
    for (int cyc = 0; cyc < cycles; ++cyc) {
        write_pgm((fs::path(args.out_dir) / frame_name(cyc)).string(),
                  phase_map_to_image(record.phase_maps[cyc]));
    }
    write_event_csv((fs::path(args.out_dir) / "events.csv").string(), record.events);

    PhaseMapSequence seq{record.phase_maps, period_transient};
    const auto period = detect_period(seq, period_max);

    auto out = open_out(fs::path(args.out_dir) / "summary.csv");
    out << "metric,value\n";
    out << "cycles," << cycles << '\n';
    out << "total_events," << record.events.size() << '\n';
    out << "detected_period," << (period ? std::to_string(*period) : "none") << '\n';
    return 0;
}

int run_cnn_cmd(const CommonArgs& args)
{
    Scenario sc = Scenario::load(args.scenario_path);
    if (sc.get<std::string>("kind") != "cnn-run") {
        throw ConfigError("scenario kind is not cnn-run");
    }
    const int height = sc.get<int>("height");
    const int width = sc.get<int>("width");
    CnnTemplate tpl = load_cnn_template(sc.get<std::string>("template"));

    RealGrid u(height, width, sc.get_or("u", 0.0));
    if (sc.has("u_image")) {
        GrayImage img = load_scaled_image(sc.get<std::string>("u_image"), args);
        if (img.rows() != height || img.cols() != width) {
            throw ConfigError("u image dimensions do not match the grid");
        }
        u = image_to_values(img, sc.get_or("u_lo", -1.0), sc.get_or("u_hi", 1.0));
    }
    RealGrid x0(height, width, sc.get_or("x0", 0.0));
    if (sc.has("x0_image")) {
        GrayImage img = load_scaled_image(sc.get<std::string>("x0_image"), args);
        if (img.rows() != height || img.cols() != width) {
            throw ConfigError("x0 image dimensions do not match the grid");
        }
        x0 = image_to_values(img, sc.get_or("x0_lo", -1.0), sc.get_or("x0_hi", 1.0));
    }

    const double dt = sc.get_or("dt", 0.01);
    const double t_end = sc.get<double>("t_end");
    const double tol = sc.get_or("tol", 1e-6);
    sc.finish();

    CnnRunResult result = cnn_run(x0, u, tpl, dt, t_end, tol);

    fs::create_directories(args.out_dir);
    GrayImage img(height, width);
    for (std::size_t i = 0; i < img.size(); ++i) {
        const double v = std::clamp(result.x_final.data()[i], -1.0, 1.0);
        img.data()[i] = static_cast<std::uint8_t>(std::lround((v + 1.0) * 127.5));
    }
    write_pgm((fs::path(args.out_dir) / "x_final.pgm").string(), img);

    auto out = open_out(fs::path(args.out_dir) / "summary.csv");
    out << "metric,value\n";
    out << "converged," << (result.converged ? 1 : 0) << '\n';
    out << "t_stop," << format_double(result.t_stop) << '\n';
    return 0;
}

int run_analyze_cmd(const CommonArgs& args)
{
    Scenario sc = Scenario::load(args.scenario_path);
    if (sc.get<std::string>("kind") != "analyze") {
        throw ConfigError("scenario kind is not analyze");
    }
    const std::string input_dir = sc.get<std::string>("input_dir");
    const int transient = sc.get_or("transient", 0);
    const int period_max = sc.get_or("period_max", 64);

    std::vector<fs::path> frame_paths;
    for (const auto& entry : fs::directory_iterator(input_dir)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("cycle_", 0) == 0 && entry.path().extension() == ".pgm") {
            frame_paths.push_back(entry.path());
        }
    }
    std::sort(frame_paths.begin(), frame_paths.end());
    if (frame_paths.empty()) throw ConfigError("no cycle_*.pgm frames in " + input_dir);

    PhaseMapSequence seq;
    seq.transient_skip = transient;
    for (const auto& p : frame_paths) {
        seq.maps.push_back(image_to_phase_map(read_pgm(p.string())));
    }

    fs::create_directories(args.out_dir);
    auto out = open_out(fs::path(args.out_dir) / "summary.csv");
    out << "metric,value\n";
    out << "frames," << seq.maps.size() << '\n';

    const auto period = detect_period(seq, period_max);
    out << "detected_period," << (period ? std::to_string(*period) : "none") << '\n';

    try {
        auto track = centroid_track(seq);
        std::optional<std::pair<double, double>> first, last;
        for (const auto& c : track) {
            if (!c) continue;
            if (!first) first = c;
            last = c;
        }
        out << "centroid_col_start," << format_double(first->second) << '\n';
        out << "centroid_col_end," << format_double(last->second) << '\n';
    } catch (const AllEmpty&) {
        out << "centroid_col_start,none\n";
        out << "centroid_col_end,none\n";
    }

    if (sc.has("mask_image")) {
        const BoolGrid mask = image_to_phase_map(
            load_scaled_image(sc.get<std::string>("mask_image"), args));
        EdgeScoreResult edge = edge_score(seq, mask);
        out << "edge_best_cycle," << edge.best_cycle << '\n';
        out << "edge_best_f1," << format_double(edge.best.f1) << '\n';
        out << "edge_best_precision," << format_double(edge.best.precision) << '\n';
        out << "edge_best_recall," << format_double(edge.best.recall) << '\n';
    }

    if (sc.has("gray_image")) {
        GrayImage img =
            load_scaled_image(sc.get<std::string>("gray_image"), args);
        RealGrid gray(img.rows(), img.cols());
        for (std::size_t i = 0; i < img.size(); ++i) {
            gray.data()[i] = static_cast<double>(img.data()[i]);
        }
        double best_agree = -1.0;
        double best_theta = 0.0;
        int best_cycle = -1;
        for (std::size_t i = transient; i < seq.maps.size(); ++i) {
            SegmentationScore s = segmentation_score(seq.maps[i], gray);
            if (s.agreement > best_agree) {
                best_agree = s.agreement;
                best_theta = s.threshold;
                best_cycle = static_cast<int>(i);
            }
        }
        out << "seg_best_cycle," << best_cycle << '\n';
        out << "seg_best_agreement," << format_double(best_agree) << '\n';
        out << "seg_best_threshold," << format_double(best_theta) << '\n';
    }
    sc.finish();
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Tunneling-phase-logic cellular nonlinear network simulator"};
    app.require_subcommand(1);

    CommonArgs sweep_args, net_args, cnn_args, analyze_args;
    auto* sweep = app.add_subcommand("element-sweep", "lock map over element parameters");
    add_common(sweep, sweep_args);
    auto* net = app.add_subcommand("network-run", "simulate a coupled lattice");
    add_common(net, net_args);
    auto* cnn = app.add_subcommand("cnn-run", "reference CNN integrator");
    add_common(cnn, cnn_args);
    auto* analyze = app.add_subcommand("analyze", "analyze a saved run directory");
    add_common(analyze, analyze_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << "error: config: " << e.what() << std::endl;
        return 1;
    }

    try {
        if (sweep->parsed()) return run_element_sweep(sweep_args);
        if (net->parsed()) return run_network_cmd(net_args);
        if (cnn->parsed()) return run_cnn_cmd(cnn_args);
        if (analyze->parsed()) return run_analyze_cmd(analyze_args);
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "error: config: " << e.what() << std::endl;
        return 1;
    } catch (const IoError& e) {
        std::cerr << "error: io: " << e.what() << std::endl;
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: runtime: " << e.what() << std::endl;
        return 2;
    }
}
