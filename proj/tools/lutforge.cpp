#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lutforge/bench.hpp"
#include "lutforge/curve.hpp"
#include "lutforge/imgio.hpp"
#include "lutforge/losses.hpp"
#include "lutforge/lut3d.hpp"
#include "lutforge/metrics.hpp"
#include "lutforge/noise.hpp"
#include "lutforge/optimizer.hpp"
#include "lutforge/parallel.hpp"
#include "lutforge/spectral.hpp"
#include "lutforge/synth.hpp"

using json = nlohmann::json;
using namespace lutforge;

namespace {

constexpr const char* kVersion = "0.1.0";

std::uint64_t fnv1a_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot hash missing file: " + path);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    char buf[4096];
    while (is.read(buf, sizeof buf) || is.gcount() > 0) {
        for (std::streamsize i = 0; i < is.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ULL;
        }
        if (!is) break;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

std::uint64_t fnv1a_str(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Timings in ms keyed by stage name; outputs listed with content hashes.
struct Manifest {
    json j;

    Manifest(const std::string& subcommand, std::uint64_t seed, const std::string& config_repr) {
        j["schema"] = 1;
        j["tool_version"] = kVersion;
        j["subcommand"] = subcommand;
        j["seed"] = seed;
        j["config_hash"] = hex64(fnv1a_str(config_repr));
        j["inputs"] = json::array();
        j["outputs"] = json::array();
        j["timings_ms"] = json::object();
    }
    void add_input(const std::string& path) { j["inputs"].push_back(path); }
    void add_output(const std::string& path) {
        j["outputs"].push_back({{"path", path}, {"hash", hex64(fnv1a_file(path))}});
    }
    void add_timing(const std::string& stage, double ms) { j["timings_ms"][stage] = ms; }
    void write(const std::string& path) {
        std::ofstream os(path);
        if (!os) throw std::runtime_error("cannot write manifest: " + path);
        os << j.dump(2) << "\n";
    }
};

class StageTimer {
public:
    explicit StageTimer(Manifest& m, std::string stage) : m_(m), stage_(std::move(stage)) {}
    ~StageTimer() {
        const auto t1 = std::chrono::steady_clock::now();
        m_.add_timing(stage_, std::chrono::duration<double, std::milli>(t1 - t0_).count());
    }

private:
    Manifest& m_;
    std::string stage_;
    std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

CurveMode parse_mode(const std::string& s) {
    if (s == "per_step_lookup") return CurveMode::PerStepLookup;
    if (s == "fixed_params") return CurveMode::FixedParams;
    throw CLI::ValidationError("--mode", "expected per_step_lookup or fixed_params");
}

void load_config_file(OptimConfig& cfg, const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config: " + path);
    json j;
    is >> j;
    if (j.contains("iterations")) cfg.iterations = j["iterations"].get<int>();
    if (j.contains("learning_rate")) cfg.learning_rate = j["learning_rate"].get<double>();
    if (j.contains("lut_size")) cfg.lut_size = j["lut_size"].get<int>();
    if (j.contains("curve_steps")) cfg.curve_steps = j["curve_steps"].get<int>();
    if (j.contains("curve_mode")) cfg.curve_mode = parse_mode(j["curve_mode"].get<std::string>());
    if (j.contains("detach_params")) cfg.detach_params = j["detach_params"].get<bool>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("optimizer")) {
        const auto k = j["optimizer"].get<std::string>();
        if (k == "adam")
            cfg.kind = OptimKind::Adam;
        else if (k == "sgd")
            cfg.kind = OptimKind::Sgd;
        else
            throw std::runtime_error("config: optimizer must be adam or sgd");
    }
    if (j.contains("weights")) {
        const auto& w = j["weights"];
        if (w.contains("exposure")) cfg.weights.exposure = w["exposure"].get<double>();
        if (w.contains("color")) cfg.weights.color = w["color"].get<double>();
        if (w.contains("smoothing")) cfg.weights.smoothing = w["smoothing"].get<double>();
    }
    if (j.contains("wmap_smooth_weight"))
        cfg.wmap_smooth_weight = j["wmap_smooth_weight"].get<double>();
}

int cmd_enhance(const std::string& input, const std::string& llut_path,
                const std::string& nlut_path, const std::string& wmap_path, int steps,
                const std::string& mode_str, const std::string& output,
                const std::string& metrics_ref, bool emit_json, const std::string& manifest_path) {
    Manifest manifest("enhance", 0, input + llut_path + nlut_path + mode_str);
    manifest.add_input(input);
    manifest.add_input(llut_path);

    const Image img = load_image(input);
    const Lut3D llut = Lut3D::load(llut_path);
    if (llut.value_range() != ValueRange::Signed)
        throw std::runtime_error(llut_path + ": LLUT must carry the [-1,1] range tag, got a color LUT");

    Image enhanced;
    {
        StageTimer t(manifest, "enhance");
        enhanced = enhance_image(llut, img, steps, parse_mode(mode_str));
    }
    Image final_img = enhanced;
    if (!nlut_path.empty()) {
        manifest.add_input(nlut_path);
        const Lut3D nlut = Lut3D::load(nlut_path);
        if (nlut.value_range() != ValueRange::Unit)
            throw std::runtime_error(nlut_path + ": NLUT must carry the [0,1] range tag");
        WeightMap wmap = wmap_path.empty() ? weight_map_uniform(img.h, img.w, 1.0)
                                           : load_wmap(wmap_path);
        if (!wmap_path.empty()) manifest.add_input(wmap_path);
        StageTimer t(manifest, "suppress");
        final_img = suppress_image(nlut, enhanced, wmap);
    }
    save_image(final_img, output);
    manifest.add_output(output);

    json report;
    report["output"] = output;
    report["input_mean"] = mean_intensity(img);
    report["output_mean"] = mean_intensity(final_img);
    if (!metrics_ref.empty()) {
        const Image ref = load_image(metrics_ref);
        const double p = psnr(final_img, ref);
        report["psnr_db"] = std::isinf(p) ? json("inf") : json(p);
        report["ssim"] = ssim(final_img, ref);
    }
    if (!manifest_path.empty()) manifest.write(manifest_path);
    report["timings_ms"] = manifest.j["timings_ms"];

    if (emit_json) {
        std::cout << report.dump(2) << "\n";
    } else {
        std::cout << "wrote " << output << " (mean " << report["output_mean"].get<double>()
                  << ", input mean " << report["input_mean"].get<double>() << ")\n";
        if (report.contains("psnr_db"))
            std::cout << "psnr: " << report["psnr_db"].dump() << " dB, ssim: "
                      << report["ssim"].get<double>() << "\n";
    }
    return 0;
}

int cmd_fit(const std::string& stage, const std::string& input, const std::string& pseudo_ref,
            const std::string& config_path, const std::string& out_lut,
            const std::string& out_wmap, const std::string& trace_path, bool emit_json,
            std::string manifest_path) {
    OptimConfig cfg = stage == "llut" ? OptimConfig::llut_defaults() : OptimConfig::nlut_defaults();
    if (!config_path.empty()) load_config_file(cfg, config_path);

    Manifest manifest("fit", cfg.seed, stage + config_path + input + pseudo_ref);
    manifest.add_input(input);
    const Image img = load_image(input);

    std::vector<LossReport> trace;
    if (stage == "llut") {
        StageTimer t(manifest, "fit_llut");
        LlutFit fit = fit_llut(img, cfg);
        fit.lut.save(out_lut);
        trace = std::move(fit.trace);
    } else if (stage == "nlut") {
        if (pseudo_ref.empty()) throw std::runtime_error("fit --stage nlut requires --pseudo-ref");
        manifest.add_input(pseudo_ref);
        const Image ref = load_image(pseudo_ref);
        StageTimer t(manifest, "fit_nlut");
        NlutFit fit = fit_nlut(img, ref, cfg);
        fit.lut.save(out_lut);
        if (!out_wmap.empty()) {
            save_wmap(fit.wmap, out_wmap);
        }
        trace = std::move(fit.trace);
    } else {
        throw std::runtime_error("fit: --stage must be llut or nlut");
    }
    manifest.add_output(out_lut);
    if (stage == "nlut" && !out_wmap.empty()) manifest.add_output(out_wmap);

    if (!trace_path.empty()) {
        std::ofstream os(trace_path);
        if (!os) throw std::runtime_error("cannot write trace: " + trace_path);
        for (const auto& r : trace) os << r.to_json() << "\n";
        manifest.add_output(trace_path);
    }
    if (manifest_path.empty()) manifest_path = out_lut + ".manifest.json";
    manifest.write(manifest_path);

    json summary{{"iterations", trace.size()},
                 {"initial_total", trace.front().total},
                 {"final_total", trace.back().total},
                 {"manifest", manifest_path}};
    if (emit_json)
        std::cout << summary.dump(2) << "\n";
    else
        std::cout << "fit " << stage << ": total " << trace.front().total << " -> "
                  << trace.back().total << " over " << trace.size() << " iterations\n";
    return 0;
}

int cmd_bench(const std::string& resolutions, int repeat, int warmup, bool emit_json) {
    std::vector<std::pair<int, int>> sizes; // (w, h)
    {
        std::size_t pos = 0;
        while (pos < resolutions.size()) {
            const std::size_t comma = resolutions.find(',', pos);
            const std::string tok = resolutions.substr(pos, comma == std::string::npos
                                                               ? std::string::npos
                                                               : comma - pos);
            const std::size_t xp = tok.find('x');
            if (xp == std::string::npos) throw std::runtime_error("bench: bad resolution " + tok);
            sizes.emplace_back(std::stoi(tok.substr(0, xp)), std::stoi(tok.substr(xp + 1)));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    }

    // A mildly non-trivial table pair so interpolation paths are exercised.
    Lut3D llut(9, ValueRange::Signed);
    for (std::size_t i = 0; i < llut.entries().size(); ++i)
        llut.entries()[i] = 0.3 * std::sin(0.7 * static_cast<double>(i));
    const Lut3D nlut = Lut3D::identity(17, ValueRange::Unit);

    json out;
    out["repeat"] = repeat;
    out["warmup"] = warmup;
    out["threads"] = thread_count();
    out["resolutions"] = json::array();
    std::vector<ScalingEntry> scaling;
    for (const auto& [w, h] : sizes) {
        const Image img = synth_value_noise(h, w, 42, 0.3, 0.25);
        const WeightMap wmap = weight_map_uniform(h, w, 1.0);
        const TimingStats stats = measure(
            [&] {
                const Image enh = enhance_image(llut, img, 8, CurveMode::PerStepLookup);
                suppress_image(nlut, enh, wmap);
            },
            warmup, repeat);
        const std::size_t pixels = static_cast<std::size_t>(w) * h;
        const std::string label = std::to_string(w) + "x" + std::to_string(h);
        out["resolutions"].push_back(
            {{"label", label},
             {"pixels", pixels},
             {"min_ms", stats.min_ms},
             {"median_ms", stats.median_ms},
             {"mean_ms", stats.mean_ms},
             {"stddev_ms", stats.stddev_ms},
             {"pixels_per_second", pixels / (stats.median_ms / 1000.0)}});
        scaling.push_back({label, pixels, stats.median_ms});
    }
    const ScalingReport sr = scaling_check(scaling);
    out["scaling"] = json::array();
    for (const auto& r : sr.ratios)
        out["scaling"].push_back({{"from", r.from},
                                  {"to", r.to},
                                  {"pixel_ratio", r.pixel_ratio},
                                  {"time_ratio", r.time_ratio},
                                  {"super_linear", r.super_linear}});

    if (emit_json) {
        std::cout << out.dump(2) << "\n";
    } else {
        std::printf("%-12s %10s %10s %10s %14s\n", "resolution", "min ms", "median ms", "mean ms",
                    "Mpixels/s");
        for (const auto& r : out["resolutions"])
            std::printf("%-12s %10.2f %10.2f %10.2f %14.2f\n",
                        r["label"].get<std::string>().c_str(), r["min_ms"].get<double>(),
                        r["median_ms"].get<double>(), r["mean_ms"].get<double>(),
                        r["pixels_per_second"].get<double>() / 1e6);
        for (const auto& r : out["scaling"])
            std::printf("%s -> %s: pixel ratio %.2f, time ratio %.2f%s\n",
                        r["from"].get<std::string>().c_str(), r["to"].get<std::string>().c_str(),
                        r["pixel_ratio"].get<double>(), r["time_ratio"].get<double>(),
                        r["super_linear"].get<bool>() ? " (super-linear)" : "");
    }
    return 0;
}

int cmd_pci(const std::string& input, const std::string& output, bool emit_json) {
    const Image img = load_image(input);
    const PhaseOnlyResult res = phase_only_reconstruction(img);
    save_image(res.image, output);
    json j{{"output", output},
           {"constant_channels",
            json::array({res.constant_channel[0], res.constant_channel[1], res.constant_channel[2]})}};
    if (emit_json)
        std::cout << j.dump(2) << "\n";
    else
        std::cout << "wrote " << output << "\n";
    return 0;
}

int cmd_noise(const std::string& input, int t, std::uint64_t seed, const std::string& output,
              bool emit_json) {
    const Image img = load_image(input);
    const NoiseSchedule schedule = NoiseSchedule::linear();
    const Image noisy = forward_noise(img, t, schedule, seed);
    save_image(noisy, output);
    json j{{"output", output}, {"t", t}, {"seed", seed},
           {"alpha_bar", schedule.alpha_bar[t]}};
    if (emit_json)
        std::cout << j.dump(2) << "\n";
    else
        std::cout << "wrote " << output << " (alpha_bar " << schedule.alpha_bar[t] << ")\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"lutforge: 3D-LUT low-light enhancement pipeline"};
    app.fallthrough(); // accept --threads / --json after a subcommand name
    app.require_subcommand(1);

    int threads = 0;
    app.add_option("--threads", threads, "worker thread cap (default: hardware, or LUTFORGE_THREADS)");
    bool emit_json = false;
    app.add_flag("--json", emit_json, "machine-readable JSON on stdout");

    // enhance
    auto* enh = app.add_subcommand("enhance", "apply LLUT curve steps and optional NLUT stage");
    std::string in_path, llut_path, nlut_path, wmap_path, out_path, metrics_ref, mode =
        "per_step_lookup", manifest_path;
    int steps = 8;
    enh->add_option("--input", in_path)->required();
    enh->add_option("--llut", llut_path)->required();
    enh->add_option("--nlut", nlut_path);
    enh->add_option("--wmap", wmap_path);
    enh->add_option("--steps", steps);
    enh->add_option("--mode", mode);
    enh->add_option("--output", out_path)->required();
    enh->add_option("--metrics-ref", metrics_ref);
    enh->add_option("--manifest", manifest_path);

    // fit
    auto* fit = app.add_subcommand("fit", "optimize LLUT or NLUT entries for one image");
    std::string stage, pseudo_ref, config_path, out_lut, out_wmap, trace_path, fit_manifest;
    fit->add_option("--stage", stage)->required()->check(CLI::IsMember({"llut", "nlut"}));
    fit->add_option("--input", in_path)->required();
    fit->add_option("--pseudo-ref", pseudo_ref);
    fit->add_option("--config", config_path);
    fit->add_option("--out-lut", out_lut)->required();
    fit->add_option("--out-wmap", out_wmap);
    fit->add_option("--trace", trace_path);
    fit->add_option("--manifest", fit_manifest);

    // bench
    auto* bench = app.add_subcommand("bench", "time the full enhance pass across resolutions");
    std::string resolutions = "640x480,1920x1080,3840x2160";
    int repeat = 100, warmup = 3;
    bench->add_option("--resolutions", resolutions);
    bench->add_option("--repeat", repeat);
    bench->add_option("--warmup", warmup);

    // pci
    auto* pci = app.add_subcommand("pci", "phase-only reconstruction image");
    pci->add_option("--input", in_path)->required();
    pci->add_option("--output", out_path)->required();

    // noise
    auto* noise = app.add_subcommand("noise", "diffusion forward noising");
    int t = 0;
    std::uint64_t seed = 0;
    noise->add_option("--input", in_path)->required();
    noise->add_option("--t", t)->required();
    noise->add_option("--seed", seed);
    noise->add_option("--output", out_path)->required();

    CLI11_PARSE(app, argc, argv);
    if (threads > 0) set_thread_count(threads);

    try {
        if (*enh)
            return cmd_enhance(in_path, llut_path, nlut_path, wmap_path, steps, mode, out_path,
                               metrics_ref, emit_json, manifest_path);
        if (*fit)
            return cmd_fit(stage, in_path, pseudo_ref, config_path, out_lut, out_wmap, trace_path,
                           emit_json, fit_manifest);
        if (*bench) return cmd_bench(resolutions, repeat, warmup, emit_json);
        if (*pci) return cmd_pci(in_path, out_path, emit_json);
        if (*noise) return cmd_noise(in_path, t, seed, out_path, emit_json);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
