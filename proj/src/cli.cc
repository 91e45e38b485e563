#include "apmqec/cli.h"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "apmqec/alist.h"
#include "apmqec/code.h"
#include "apmqec/compiler.h"
#include "apmqec/dem_io.h"
#include "apmqec/distance.h"
#include "apmqec/errors.h"
#include "apmqec/fixtures.h"
#include "apmqec/hierarchical.h"
#include "apmqec/memory.h"
#include "apmqec/metrics.h"
#include "apmqec/motion.h"
#include "apmqec/rng.h"
#include "apmqec/search.h"

namespace apmqec {

namespace fs = std::filesystem;

std::string RunManifest::digest_of(const std::string &command, const Json &config) {
    return fmt::format("{:016x}", fnv1a(command + "\n" + config.dump()));
}

Json RunManifest::to_json() const {
    return {{"command", command},     {"digest", digest},   {"seed", seed},
            {"tool_version", tool_version}, {"config", config}, {"outputs", outputs},
            {"wall_clock_s", wall_clock_s}};
}

namespace {

// Exit status for a check that ran but failed.
struct CheckFailed {
    std::string message;
};

std::string file_digest(const std::string &path) {
    return fmt::format("{:016x}", fnv1a(read_text_file(path)));
}

// Output directory bookkeeping for one command.
class Run {
   public:
    Run(std::string command, std::string dir, uint64_t seed) : dir_(std::move(dir)) {
        manifest_.command = std::move(command);
        manifest_.seed = seed;
        manifest_.config["seed"] = seed;
    }

    Json &config() { return manifest_.config; }
    void add_input(const std::string &key, const std::string &path) {
        manifest_.config["inputs"][key] = {{"path", fs::path(path).filename().string()}, {"fnv", file_digest(path)}};
    }
    // Freezes the config; outputs written afterwards carry the digest.
    const std::string &seal() {
        manifest_.digest = RunManifest::digest_of(manifest_.command, manifest_.config);
        fs::create_directories(dir_);
        return manifest_.digest;
    }
    const std::string &digest() const { return manifest_.digest; }
    std::string path(const std::string &name) {
        manifest_.outputs.push_back(name);
        return (fs::path(dir_) / name).string();
    }
    void write_json(const std::string &name, Json j) {
        Json out{{"manifest", digest()}};
        for (auto &[k, v] : j.items()) out[k] = v;
        write_text_file(path(name), out.dump(2) + "\n");
    }
    void finish(double seconds) {
        manifest_.wall_clock_s = seconds;
        write_text_file((fs::path(dir_) / "manifest.json").string(), manifest_.to_json().dump(2) + "\n");
    }

   private:
    std::string dir_;
    RunManifest manifest_;
};

Basis parse_basis(const std::string &s) {
    if (s == "X" || s == "x") return Basis::X;
    if (s == "Z" || s == "z") return Basis::Z;
    throw DomainError("basis must be X or Z, got '" + s + "'");
}

std::string basis_name(Basis b) { return b == Basis::X ? "X" : "Z"; }

struct SpecSource {
    std::string path;
    int64_t fixture = 0;

    void add_to(CLI::App *app) {
        app->add_option("--spec", path, "code spec JSON {P, f, g}");
        app->add_option("--fixture", fixture, "shipped instance by P (96, 192, 384)");
    }
    CodeSpec load(Run &run) const {
        if (!path.empty() && fixture) throw DomainError("give either --spec or --fixture, not both");
        if (!path.empty()) {
            run.add_input("spec", path);
            return spec_from_json(read_json_file(path));
        }
        if (!fixture) throw DomainError("missing --spec or --fixture");
        run.config()["fixture"] = fixture;
        return load_fixture_spec(fixture);
    }
};

Json step_to_json(const MoveStep &s) {
    Json j{{"kind", step_kind_name(s.kind)}, {"axis", s.axis == Axis::Row ? "row" : "column"}};
    if (s.amount) j["amount"] = s.amount;
    if (!s.indices.empty()) j["indices"] = s.indices;
    return j;
}

Json girth_json(const Girth &g) {
    if (g.is_infinite()) return "inf";
    return g.length;
}

Json tier_stats_to_json(const TierStats &s) {
    Json tiers = Json::array();
    for (int t = 1; t <= 3; t++) {
        tiers.push_back({{"tier", t},
                         {"reached", s.reached[t - 1]},
                         {"converged", s.converged[t - 1]},
                         {"q", s.q(t)},
                         {"mean_iterations", s.mean_iterations(t)}});
    }
    return {{"shots", s.shots},
            {"tiers", tiers},
            {"failures_t1", s.failures_t1},
            {"failures_t12", s.failures_t12},
            {"failures_t123", s.failures_t123}};
}

TierStats decode_parallel(const MemoryExperiment &ex, const ShotBatch &batch, const TierConfig &cfg, size_t threads) {
    size_t shots = batch.shots();
    threads = std::max<size_t>(1, std::min(threads, shots));
    std::vector<TierStats> parts(threads);
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (size_t t = 0; t < threads; t++) {
        size_t begin = shots * t / threads, end = shots * (t + 1) / threads;
        pool.emplace_back([&, t, begin, end] {
            try {
                parts[t] = hierarchical_decode(ex, batch, cfg, begin, end);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto &th : pool) th.join();
    for (auto &e : errors) {
        if (e) std::rethrow_exception(e);
    }
    TierStats total;
    for (const auto &p : parts) total.merge(p);
    return total;
}

// First positional token when it is not a known subcommand.
std::optional<std::string> unknown_subcommand(const CLI::App &app, int argc, const char *const *argv) {
    for (int i = 1; i < argc; i++) {
        std::string tok = argv[i];
        if (tok == "--seed" || tok == "--out" || tok == "--threads") {
            i++;
            continue;
        }
        if (tok.starts_with("-")) continue;
        for (const auto *sub : app.get_subcommands({})) {
            if (sub->get_name() == tok) return std::nullopt;
        }
        return tok;
    }
    return std::nullopt;
}

// Directories contribute their JSON outputs in name order, minus manifests and earlier reports.
std::vector<std::string> expand_report_inputs(const std::vector<std::string> &inputs) {
    std::vector<std::string> out;
    for (const auto &in : inputs) {
        if (!fs::is_directory(in)) {
            out.push_back(in);
            continue;
        }
        std::vector<std::string> found;
        for (const auto &e : fs::directory_iterator(in)) {
            auto name = e.path().filename().string();
            if (e.path().extension() == ".json" && name != "manifest.json" && name != "report.json") {
                found.push_back(e.path().string());
            }
        }
        std::sort(found.begin(), found.end());
        out.insert(out.end(), found.begin(), found.end());
    }
    return out;
}

}  // namespace

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"APM quantum LDPC code toolkit", "apmqec"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);
    uint64_t seed = 0;
    std::string out_dir = "apmqec_out";
    size_t threads = 1;
    app.add_option("--seed", seed, "master seed; every random stream derives from it")->capture_default_str();
    app.add_option("--out", out_dir, "output directory")->capture_default_str();
    app.add_option("--threads", threads, "worker threads for decoding")->capture_default_str();

    auto *build = app.add_subcommand("build-code", "write H_X/H_Z alist files and code parameters");
    SpecSource build_spec;
    build_spec.add_to(build);

    auto *check = app.add_subcommand("check-code", "verify CSS orthogonality and search constraints");
    SpecSource check_spec;
    check_spec.add_to(check);
    std::vector<int> check_pairs{0, 3, 1, 2};
    size_t check_girth = 6;
    check->add_option("--pairs", check_pairs, "flattened (i, j) pairs where F_i and G_j must not commute");
    check->add_option("--girth-min", check_girth)->capture_default_str();

    auto *srch = app.add_subcommand("search", "randomized constrained search over APM tuples");
    std::string search_config_path, search_reference_from;
    std::optional<size_t> search_seeds;
    srch->add_option("--config", search_config_path, "search config JSON")->required();
    srch->add_option("--reference-from", search_reference_from, "spec JSON whose derived reference to use");
    srch->add_option("--seeds", search_seeds, "override the number of seeds");

    auto *dist = app.add_subcommand("distance", "randomized distance upper bound");
    SpecSource dist_spec;
    dist_spec.add_to(dist);
    uint64_t dist_trials = 200;
    dist->add_option("--trials", dist_trials)->capture_default_str();

    auto *comp = app.add_subcommand("compile-moves", "compile transition APMs into AOD move schedules");
    SpecSource comp_spec;
    comp_spec.add_to(comp);
    std::string comp_basis = "X";
    comp->add_option("--basis", comp_basis)->capture_default_str();

    auto *time = app.add_subcommand("estimate-time", "syndrome-extraction round time and footprint");
    SpecSource time_spec;
    time_spec.add_to(time);
    MotionConfig motion;
    time->add_option("--aods", motion.n_aod_pairs, "AOD pairs (2 or 4)")->capture_default_str();
    time->add_option("--acceleration", motion.acceleration_m_per_s2, "m/s^2")->capture_default_str();
    time->add_option("--measurement-us", motion.measurement_time_us)->capture_default_str();

    auto *sim = app.add_subcommand("simulate", "sample a memory experiment");
    SpecSource sim_spec;
    sim_spec.add_to(sim);
    size_t sim_rounds = 32, sim_shots = 1000;
    std::string sim_basis = "Z", sim_noise = "phenomenological";
    double sim_p = 1e-3;
    sim->add_option("--rounds", sim_rounds)->capture_default_str();
    sim->add_option("--shots", sim_shots)->capture_default_str();
    sim->add_option("--basis", sim_basis)->capture_default_str();
    sim->add_option("--noise", sim_noise, "phenomenological or code_capacity")->capture_default_str();
    sim->add_option("--p", sim_p, "physical error rate")->capture_default_str();

    auto *dec = app.add_subcommand("decode", "hierarchical decoding of a shot file");
    std::string dec_dem, dec_shots;
    size_t dec_iters = 30;
    bool dec_sum_product = false, dec_no_t2 = false, dec_no_t3 = false;
    dec->add_option("--dem", dec_dem, "detector error model")->required();
    dec->add_option("--shots", dec_shots, "shot file")->required();
    dec->add_option("--max-iters", dec_iters, "tier-1 BP iterations")->capture_default_str();
    dec->add_flag("--sum-product", dec_sum_product, "tier 1 uses sum-product instead of min-sum");
    dec->add_flag("--no-tier2", dec_no_t2);
    dec->add_flag("--no-tier3", dec_no_t3);

    auto *thr = app.add_subcommand("throughput", "decoder throughput model");
    std::string thr_model;
    thr->add_option("--model", thr_model, "throughput model JSON")->required();

    auto *rep = app.add_subcommand("report", "combine command outputs into one summary");
    std::vector<std::string> rep_inputs;
    rep->add_option("inputs", rep_inputs, "JSON outputs of other commands, or directories holding them")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        if (auto unknown = unknown_subcommand(app, argc, argv)) {
            err << "unknown subcommand '" << *unknown << "'; run with --help for the list\n";
            return 2;
        }
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    auto *cmd = app.get_subcommands().front();
    auto t0 = std::chrono::steady_clock::now();
    Run run(cmd->get_name(), out_dir, seed);
    int status = 0;
    try {
        if (cmd == build) {
            auto spec = build_spec.load(run);
            run.config()["spec"] = spec_to_json(spec);
            run.seal();
            auto code = build_check_matrices(spec);
            std::string hx = export_alist(code.h_x), hz = export_alist(code.h_z);
            write_text_file(run.path("h_x.alist"), hx);
            write_text_file(run.path("h_z.alist"), hz);
            Girth gx = tanner_girth(code.h_x), gz = tanner_girth(code.h_z);
            run.write_json("code.json", {{"P", spec.P},
                                         {"n", code.n},
                                         {"k", code.k},
                                         {"checks_x", code.h_x.rows},
                                         {"checks_z", code.h_z.rows},
                                         {"girth_x", girth_json(gx)},
                                         {"girth_z", girth_json(gz)},
                                         {"alist_fnv",
                                          {{"h_x", fmt::format("{:016x}", fnv1a(hx))},
                                           {"h_z", fmt::format("{:016x}", fnv1a(hz))}}}});
            out << fmt::format("n={} k={} P={} girth_x={} girth_z={}\n", code.n, code.k, spec.P, gx.str(), gz.str());
        } else if (cmd == check) {
            auto spec = check_spec.load(run);
            if (check_pairs.size() % 2) throw DomainError("--pairs needs an even number of indices");
            std::vector<std::pair<int, int>> pairs;
            for (size_t i = 0; i < check_pairs.size(); i += 2) pairs.emplace_back(check_pairs[i], check_pairs[i + 1]);
            run.config()["spec"] = spec_to_json(spec);
            run.config()["pairs"] = check_pairs;
            run.config()["girth_min"] = check_girth;
            run.seal();
            CssCode code;
            try {
                code = build_check_matrices(spec);
            } catch (const ConstructionError &e) {
                run.write_json("check.json", {{"css", false}, {"error", e.what()}});
                throw CheckFailed{e.what()};
            }
            Girth g = tanner_girth(code.h_x), gz = tanner_girth(code.h_z);
            if (g.is_infinite() || (!gz.is_infinite() && gz.length < g.length)) g = gz;
            Apm ref = derived_reference(spec);
            bool transitions = check_transition_constraints(spec, ref);
            bool noncommute = check_noncommute_pairs(spec, pairs);
            bool girth_ok = g.at_least(check_girth);
            run.write_json("check.json", {{"css", true},
                                          {"n", code.n},
                                          {"k", code.k},
                                          {"girth", girth_json(g)},
                                          {"girth_ok", girth_ok},
                                          {"reference", apm_to_json(ref)},
                                          {"transitions_commute", transitions},
                                          {"noncommute_pairs", noncommute}});
            out << fmt::format("css=ok n={} k={} girth={} reference={} transitions={} noncommute={}\n", code.n,
                               code.k, g.str(), ref.str(), transitions ? "ok" : "FAIL", noncommute ? "ok" : "FAIL");
            if (!transitions || !noncommute || !girth_ok) throw CheckFailed{"one or more constraints failed"};
        } else if (cmd == srch) {
            run.add_input("config", search_config_path);
            Json j = read_json_file(search_config_path);
            if (!search_reference_from.empty()) {
                run.add_input("reference_from", search_reference_from);
                j["reference"] = apm_to_json(derived_reference(spec_from_json(read_json_file(search_reference_from))));
            }
            if (search_seeds) j["seeds"] = *search_seeds;
            j["seed"] = derive_seed(seed, "search");
            auto config = search_config_from_json(j);
            run.config()["search"] = search_config_to_json(config);
            run.seal();
            auto result = search(config);
            std::string lines;
            for (const auto &c : result.candidates) {
                Json cj{{"manifest", run.digest()}};
                Json body = candidate_to_json(c);
                for (auto &[k, v] : body.items()) cj[k] = v;
                lines += cj.dump() + "\n";
            }
            write_text_file(run.path("candidates.jsonl"), lines);
            run.write_json("search.json", {{"seeds", config.seeds},
                                           {"survivors", result.candidates.size()},
                                           {"rejections", result.rejections}});
            out << fmt::format("{} of {} seeds survived\n", result.candidates.size(), config.seeds);
            for (auto &[reason, count] : result.rejections) out << fmt::format("  rejected ({}): {}\n", reason, count);
        } else if (cmd == dist) {
            auto spec = dist_spec.load(run);
            run.config()["spec"] = spec_to_json(spec);
            run.config()["trials"] = dist_trials;
            run.seal();
            auto code = build_check_matrices(spec);
            auto rep = distance_upper_bound(code, dist_trials, derive_seed(seed, "distance"));
            run.write_json("distance.json", {{"d_x_upper", rep.d_x_upper},
                                             {"d_z_upper", rep.d_z_upper},
                                             {"d_upper", rep.d_upper()},
                                             {"trials", rep.trials},
                                             {"witness_x", rep.witness_x},
                                             {"witness_z", rep.witness_z}});
            out << fmt::format("d <= {} (d_x <= {}, d_z <= {}, {} trials)\n", rep.d_upper(), rep.d_x_upper,
                               rep.d_z_upper, rep.trials);
        } else if (cmd == comp) {
            auto spec = comp_spec.load(run);
            Basis basis = parse_basis(comp_basis);
            run.config()["spec"] = spec_to_json(spec);
            run.config()["basis"] = basis_name(basis);
            run.seal();
            auto layout = preferred_layout(spec);
            auto maps = transition_maps(spec, kDefaultOrdering, basis);
            auto scheds = transition_schedule(spec, kDefaultOrdering, layout, basis);
            Json transitions = Json::array();
            size_t total_steps = 0;
            for (size_t k = 0; k < scheds.size(); k++) {
                Json steps = Json::array();
                for (const auto &s : scheds[k].steps) steps.push_back(step_to_json(s));
                total_steps += scheds[k].steps.size();
                transitions.push_back({{"from", kDefaultOrdering[k]},
                                       {"to", kDefaultOrdering[k + 1]},
                                       {"map", apm_to_json(maps[k])},
                                       {"strategy", strategy_name(scheds[k].strategy)},
                                       {"verified", schedule_realizes(layout, scheds[k], maps[k])},
                                       {"steps", steps}});
            }
            run.write_json("moves.json", {{"layout", layout_kind_name(layout.kind)},
                                          {"rows", layout.rows},
                                          {"cols", layout.cols},
                                          {"transitions", transitions}});
            out << fmt::format("{} layout {}x{}, {} transitions, {} steps\n", layout_kind_name(layout.kind),
                               layout.rows, layout.cols, scheds.size(), total_steps);
        } else if (cmd == time) {
            auto spec = time_spec.load(run);
            motion.validate();
            run.config()["spec"] = spec_to_json(spec);
            run.config()["motion"] = {{"acceleration_m_per_s2", motion.acceleration_m_per_s2},
                                      {"data_pitch_um", motion.data_pitch_um},
                                      {"ancilla_offset_um", motion.ancilla_offset_um},
                                      {"cz_time_us", motion.cz_time_us},
                                      {"measurement_time_us", motion.measurement_time_us},
                                      {"n_aod_pairs", motion.n_aod_pairs}};
            run.seal();
            auto rep = se_round_time(spec, kDefaultOrdering, motion);
            write_text_file(run.path("timing.csv"), "# manifest " + run.digest() + "\n" + timing_csv(rep));
            run.write_json("timing.json", {{"total_us", rep.total_us},
                                           {"movement_us", rep.movement_us},
                                           {"gate_us", rep.gate_us},
                                           {"measurement_exposed_us", rep.measurement_exposed_us},
                                           {"width_um", rep.width_um},
                                           {"height_um", rep.height_um}});
            out << fmt::format("T_SE = {:.0f} us with {} AOD pairs, footprint {:.0f} x {:.0f} um\n", rep.total_us,
                               motion.n_aod_pairs, rep.width_um, rep.height_um);
        } else if (cmd == sim) {
            auto spec = sim_spec.load(run);
            Basis basis = parse_basis(sim_basis);
            NoiseKind kind = noise_kind_from_name(sim_noise);
            NoiseModel noise = kind == NoiseKind::CodeCapacity ? NoiseModel::code_capacity(sim_p)
                               : kind == NoiseKind::Phenomenological
                                   ? NoiseModel::phenomenological(sim_p)
                                   : NoiseModel{kind, sim_p, sim_p};
            noise.validate();
            run.config()["spec"] = spec_to_json(spec);
            run.config()["rounds"] = sim_rounds;
            run.config()["shots"] = sim_shots;
            run.config()["basis"] = basis_name(basis);
            run.config()["noise"] = noise_kind_name(kind);
            run.config()["p"] = sim_p;
            run.seal();
            auto code = build_check_matrices(spec);
            auto ex = build_memory_experiment(code, sim_rounds, basis, noise);
            write_text_file(run.path("experiment.dem"), "# manifest " + run.digest() + "\n" + export_dem(ex));
            auto batch = sample(ex, sim_shots, derive_seed(seed, "simulate"));
            write_shots_file(run.path("shots.bin"), batch, run.digest());
            out << fmt::format("{} shots, {} detectors, {} mechanisms, {} observables\n", batch.shots(),
                               ex.num_detectors(), ex.num_mechanisms(), ex.num_observables());
        } else if (cmd == dec) {
            run.add_input("dem", dec_dem);
            run.add_input("shots", dec_shots);
            TierConfig cfg;
            cfg.bp.max_iters = dec_iters;
            cfg.bp.min_sum = !dec_sum_product;
            cfg.enable_tier2 = !dec_no_t2;
            cfg.enable_tier3 = !dec_no_t3;
            cfg.seed = derive_seed(seed, "decode");
            cfg.validate();
            run.config()["max_iters"] = dec_iters;
            run.config()["min_sum"] = cfg.bp.min_sum;
            run.config()["tier2"] = cfg.enable_tier2;
            run.config()["tier3"] = cfg.enable_tier3;
            run.seal();
            auto ex = import_dem(read_text_file(dec_dem));
            auto batch = read_shots_file(dec_shots);
            if (batch.syndromes.cols() != ex.num_detectors() || batch.observables.cols() != ex.num_observables()) {
                throw DomainError("shot file widths do not match the detector error model");
            }
            auto stats = decode_parallel(ex, batch, cfg, threads);
            size_t rounds = ex.noise.kind == NoiseKind::CodeCapacity ? 1 : ex.rounds;
            auto rates = rate_metrics(stats.failures_t123, stats.shots, rounds, ex.num_observables());
            Json j = tier_stats_to_json(stats);
            j["rounds"] = rounds;
            j["k"] = ex.num_observables();
            j["basis"] = basis_name(ex.basis);
            j["noise"] = noise_kind_name(ex.noise.kind);
            j["p_data"] = ex.noise.p_data;
            j["rates"] = rate_metrics_to_json(rates);
            run.write_json("decode.json", j);
            out << fmt::format("{} shots: failures T1={} T1+T2={} T1+T2+T3={}; block rate {:.3g} [{:.3g}, {:.3g}]\n",
                               stats.shots, stats.failures_t1, stats.failures_t12, stats.failures_t123,
                               rates.block_per_shot.estimate, rates.block_per_shot.lower,
                               rates.block_per_shot.upper);
        } else if (cmd == thr) {
            run.add_input("model", thr_model);
            auto model = throughput_model_from_json(read_json_file(thr_model));
            run.config()["model"] = throughput_model_to_json(model);
            run.seal();
            auto rep = throughput(model);
            Json j = throughput_report_to_json(rep);
            j["model"] = model.name;
            run.write_json("throughput.json", j);
            out << fmt::format("{}: t_bar = {:.1f} ns, scale factor F = {:.2f}", model.name, rep.t_bar_ns,
                               rep.scale_factor);
            if (rep.backlog_probability) out << fmt::format(", tier-3 backlog {:.4f}", *rep.backlog_probability);
            out << "\n";
        } else if (cmd == rep) {
            Json parts = Json::array();
            rep_inputs = expand_report_inputs(rep_inputs);
            for (size_t i = 0; i < rep_inputs.size(); i++) run.add_input(fmt::format("input{}", i), rep_inputs[i]);
            run.seal();
            std::string md = "# apmqec report\n\n";
            for (const auto &path : rep_inputs) {
                Json j = read_json_file(path);
                parts.push_back({{"file", fs::path(path).filename().string()}, {"content", j}});
                md += fmt::format("## {}\n\n", fs::path(path).filename().string());
                for (auto &[k, v] : j.items()) {
                    if (v.is_primitive()) md += fmt::format("- {}: {}\n", k, v.dump());
                }
                md += "\n";
            }
            run.write_json("report.json", {{"parts", parts}});
            write_text_file(run.path("report.md"), "<!-- manifest " + run.digest() + " -->\n" + md);
            out << md;
        }
    } catch (const CheckFailed &e) {
        err << cmd->get_name() << ": " << e.message << "\n";
        status = 1;
    } catch (const ParseError &e) {
        err << cmd->get_name() << ": parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        err << cmd->get_name() << ": " << e.what() << "\n";
        return 2;
    }
    run.finish(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    return status;
}

}  // namespace apmqec
