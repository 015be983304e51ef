// Command-line surface for the enhancement toolkit: enhance, mix, eval,
// ssn, and gain-curve diagnostics.
//
// Exit codes: 0 success, 1 usage/config error, 2 input error,
// 3 numerical error.

#include "stsa/config.hpp"
#include "stsa/enhancer.hpp"
#include "stsa/errors.hpp"
#include "stsa/gains.hpp"
#include "stsa/metrics.hpp"
#include "stsa/wav.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

using nlohmann::ordered_json;

stsa::EnhancerConfig load_config(const std::string& path) {
    if (path.empty()) {
        stsa::EnhancerConfig c;
        c.validate();
        return c;
    }
    return stsa::EnhancerConfig::load(path);
}

int cmd_enhance(const std::string& in_path, const std::string& out_path,
                const std::string& config_path, const std::string& clean_path,
                const std::string& report_path, const std::string& variant_override,
                const std::string& phase_override) {
    stsa::EnhancerConfig cfg = load_config(config_path);
    if (!variant_override.empty()) {
        if (variant_override == "phase_blind") cfg.variant = stsa::Variant::PhaseBlind;
        else if (variant_override == "known_phase") cfg.variant = stsa::Variant::KnownPhase;
        else if (variant_override == "uncertain_phase") cfg.variant = stsa::Variant::UncertainPhase;
        else throw stsa::ConfigError("unknown variant '" + variant_override + "'");
    }
    if (!phase_override.empty()) {
        if (phase_override == "noisy") cfg.phase_source = stsa::PhaseSource::Noisy;
        else if (phase_override == "oracle_file") cfg.phase_source = stsa::PhaseSource::OracleFile;
        else if (phase_override == "stftpi") cfg.phase_source = stsa::PhaseSource::Stftpi;
        else throw stsa::ConfigError("unknown phase source '" + phase_override + "'");
    }
    cfg.validate();

    stsa::Wav in = stsa::read_wav(in_path);
    cfg.geom = stsa::FrameGeometry::for_rate(in.sample_rate);
    cfg.validate();

    std::vector<double> clean;
    if (cfg.variant != stsa::Variant::PhaseBlind &&
        cfg.phase_source == stsa::PhaseSource::OracleFile) {
        if (clean_path.empty())
            throw stsa::ConfigError("phase_source oracle_file requires --clean");
        stsa::Wav cw = stsa::read_wav(clean_path);
        if (cw.sample_rate != in.sample_rate)
            throw stsa::InputError("clean reference sample rate does not match input");
        clean = std::move(cw.samples);
    }

    stsa::EnhanceStats stats;
    std::vector<double> enhanced = stsa::enhance_signal(in.samples, cfg, clean, &stats);

    stsa::Wav out;
    out.samples = std::move(enhanced);
    out.sample_rate = in.sample_rate;
    out.format = in.format;
    stsa::write_wav(out_path, out);

    ordered_json report;
    report["input"] = in_path;
    report["output"] = out_path;
    report["frames_processed"] = stats.frames;
    report["bins"] = stats.bins;
    report["mean_gain"] = stats.mean_gain;
    report["config_hash"] = cfg.hash();
    const std::string text = report.dump(2);
    if (!report_path.empty()) {
        std::ofstream f(report_path);
        if (!f) throw stsa::InputError("cannot write report: " + report_path);
        f << text << '\n';
    } else {
        std::cout << text << '\n';
    }
    return 0;
}

int cmd_mix(const std::string& clean_path, const std::string& noise_path, double snr_db,
            const std::string& out_path, const std::string& level_mode) {
    stsa::Wav clean = stsa::read_wav(clean_path);
    stsa::Wav noise = stsa::read_wav(noise_path);
    if (clean.sample_rate != noise.sample_rate)
        throw stsa::InputError("clean and noise sample rates differ");
    stsa::MixSpec spec;
    spec.target_snr_db = snr_db;
    if (level_mode == "rms") spec.level_mode = stsa::LevelMode::Rms;
    else if (level_mode == "active") spec.level_mode = stsa::LevelMode::ActiveLevel;
    else throw stsa::ConfigError("unknown level mode '" + level_mode + "' (expected rms or active)");
    stsa::MixResult r = stsa::mix_at_snr(clean.samples, noise.samples, spec, clean.sample_rate);
    stsa::Wav out;
    out.samples = std::move(r.noisy);
    out.sample_rate = clean.sample_rate;
    out.format = stsa::Wav::Format::Float32;
    stsa::write_wav(out_path, out);
    return 0;
}

int cmd_eval(const std::string& clean_path, const std::string& proc_path,
             const std::string& metrics) {
    stsa::Wav clean = stsa::read_wav(clean_path);
    stsa::Wav proc = stsa::read_wav(proc_path);
    if (clean.sample_rate != proc.sample_rate)
        throw stsa::InputError("clean and processed sample rates differ");
    std::vector<std::string> names;
    std::string cur;
    for (char c : metrics + ",") {
        if (c == ',') {
            if (!cur.empty()) names.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (names.empty()) throw stsa::ConfigError("no metrics requested");
    std::cout << "metric,value\n";
    for (const auto& name : names) {
        double v;
        if (name == "stoi")
            v = stsa::stoi(clean.samples, proc.samples, clean.sample_rate);
        else if (name == "segsnr")
            v = stsa::segmental_snr(clean.samples, proc.samples, clean.sample_rate);
        else
            throw stsa::ConfigError("unknown metric '" + name + "' (expected stoi or segsnr)");
        std::cout << name << ',' << v << '\n';
    }
    return 0;
}

int cmd_ssn(const std::string& ref_path, double seconds, std::uint64_t seed,
            const std::string& out_path) {
    stsa::Wav ref = stsa::read_wav(ref_path);
    const auto length = static_cast<std::size_t>(seconds * ref.sample_rate);
    std::vector<double> ssn = stsa::gen_ssn(ref.samples, length, seed, ref.sample_rate);
    stsa::Wav out;
    out.samples = std::move(ssn);
    out.sample_rate = ref.sample_rate;
    out.format = stsa::Wav::Format::Float32;
    stsa::write_wav(out_path, out);
    return 0;
}

int cmd_gain_curves(const std::string& config_path, const std::string& out_path,
                    const std::vector<double>& alphas, const std::vector<double>& betas) {
    stsa::EnhancerConfig cfg = load_config(config_path);
    std::ofstream f(out_path);
    if (!f) throw stsa::InputError("cannot write curves file: " + out_path);
    // 20 log10(G) over instantaneous SNR (gamma - 1) at zeta = 0 dB
    f << "inst_snr_db";
    for (double a : alphas)
        for (double b : betas) f << ",gain_db_a" << a << "_b" << b;
    f << '\n';
    for (int s = -20; s <= 30; ++s) {
        f << s;
        const double gamma = 1.0 + std::pow(10.0, s / 10.0);
        for (double a : alphas) {
            for (double b : betas) {
                stsa::GainContext ctx;
                ctx.zeta = 1.0;
                ctx.gamma = gamma;
                ctx.noise_psd = 1.0;
                ctx.mu = cfg.mu;
                ctx.alpha = a;
                ctx.beta = b;
                ctx.delta_theta = 0.0;
                ctx.tau = 0.0;
                f << ',' << 20.0 * std::log10(stsa::gain_phase_blind(ctx));
            }
        }
        f << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Single-channel speech enhancement: Bayesian amplitude estimation "
                 "with phase-aware gains"};
    app.require_subcommand(1);

    std::string in_path, out_path, config_path, clean_path, report_path;
    std::string variant_override, phase_override;
    auto* enhance = app.add_subcommand("enhance", "Enhance a noisy WAV file");
    enhance->add_option("input", in_path, "Noisy input WAV")->required();
    enhance->add_option("output", out_path, "Enhanced output WAV")->required();
    enhance->add_option("--config", config_path, "JSON config file");
    enhance->add_option("--clean", clean_path, "Clean reference WAV (oracle phase)");
    enhance->add_option("--report", report_path, "Write JSON report here instead of stdout");
    enhance->add_option("--variant", variant_override,
                        "Override variant: phase_blind, known_phase, uncertain_phase");
    enhance->add_option("--phase", phase_override,
                        "Override phase source: noisy, oracle_file, stftpi");

    std::string mix_clean, mix_noise, mix_out, mix_mode = "rms";
    double mix_snr = 0.0;
    auto* mix = app.add_subcommand("mix", "Mix clean speech with noise at a target SNR");
    mix->add_option("clean", mix_clean, "Clean WAV")->required();
    mix->add_option("noise", mix_noise, "Noise WAV (at least as long)")->required();
    mix->add_option("snr_db", mix_snr, "Target SNR in dB")->required();
    mix->add_option("output", mix_out, "Noisy output WAV")->required();
    mix->add_option("--level-mode", mix_mode, "Level measure: rms or active");

    std::string ev_clean, ev_proc, ev_metrics = "stoi,segsnr";
    auto* ev = app.add_subcommand("eval", "Evaluate processed speech against a clean reference");
    ev->add_option("clean", ev_clean, "Clean WAV")->required();
    ev->add_option("processed", ev_proc, "Processed WAV")->required();
    ev->add_option("--metrics", ev_metrics, "Comma-separated: stoi,segsnr");

    std::string ssn_ref, ssn_out;
    double ssn_seconds = 10.0;
    std::uint64_t ssn_seed = 0;
    auto* ssn = app.add_subcommand("ssn", "Generate speech-shaped noise from a reference");
    ssn->add_option("reference", ssn_ref, "Reference WAV (>= 5 s)")->required();
    ssn->add_option("output", ssn_out, "Noise output WAV")->required();
    ssn->add_option("--seconds", ssn_seconds, "Output duration in seconds");
    ssn->add_option("--seed", ssn_seed, "Generator seed");

    std::string gc_config, gc_out = "curves.csv";
    std::vector<double> gc_alphas{0.2, 0.5, 0.8};
    std::vector<double> gc_betas{1.0};
    auto* gc = app.add_subcommand("gain-curves", "Dump gain-vs-SNR diagnostic curves");
    gc->add_option("--config", gc_config, "JSON config file");
    gc->add_option("--out", gc_out, "Output CSV path");
    gc->add_option("--alpha", gc_alphas, "Alpha grid");
    gc->add_option("--beta", gc_betas, "Beta grid");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (*enhance)
            return cmd_enhance(in_path, out_path, config_path, clean_path, report_path,
                               variant_override, phase_override);
        if (*mix) return cmd_mix(mix_clean, mix_noise, mix_snr, mix_out, mix_mode);
        if (*ev) return cmd_eval(ev_clean, ev_proc, ev_metrics);
        if (*ssn) return cmd_ssn(ssn_ref, ssn_seconds, ssn_seed, ssn_out);
        if (*gc) return cmd_gain_curves(gc_config, gc_out, gc_alphas, gc_betas);
    } catch (const stsa::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const stsa::InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return 2;
    } catch (const stsa::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 1;
}
