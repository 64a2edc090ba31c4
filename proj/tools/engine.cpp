// engine.cpp — Command-line front end: spectrum / ness / sambe / optics /
// verify pipelines over JSON model files, CSV (and mirrored JSON) output.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "floq/floq.hpp"

namespace {

// Exit codes, one per error category (documented in the README).
constexpr int kExitOk = 0;
constexpr int kExitChecksFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitParse = 4;
constexpr int kExitValidation = 5;
constexpr int kExitConfig = 6;
constexpr int kExitNumerical = 7;
constexpr int kExitIntegrity = 8;

void emit_error_record(const std::string& category, const std::string& message)
{
    floq::json record;
    record["error"] = {{"category", category}, {"message", message}};
    std::cerr << record.dump() << '\n';
}

struct CommonArgs {
    std::string model_path;
    std::string out_path;
    int slices = 512;
    double t0 = 0.0;
    int cutoff = 6;
    bool json_mirror = false;
    bool slices_given = false;
    bool t0_given = false;
    bool cutoff_given = false;

    // Flags beat the config embedded in the model document, which beats
    // the built-in defaults.
    void merge_embedded(const floq::EmbeddedConfig& cfg)
    {
        if (!slices_given && cfg.slices > 0) slices = cfg.slices;
        if (!t0_given && cfg.has_t0) t0 = cfg.t0;
        if (!cutoff_given && cfg.cutoff >= 0) cutoff = cfg.cutoff;
    }
};

void add_io_options(CLI::App* cmd, CommonArgs& args, bool needs_model = true)
{
    if (needs_model) {
        cmd->add_option("--model", args.model_path, "input model file (JSON)")->required();
    }
    cmd->add_option("--out", args.out_path, "output file path")->required();
    cmd->add_flag("--json", args.json_mirror, "also write <out>.json with the same content");
}

int run_spectrum(CommonArgs args, bool with_ness)
{
    const floq::ModelFile file = floq::read_model_file(args.model_path);
    args.merge_embedded(file.config);
    const floq::LindbladModel& model = file.model;
    floq::require_valid(model);
    const floq::SpectralOptions sopts =
        floq::apply_tolerances(floq::SpectralOptions{}, file.config.tolerances);
    floq::PropagatorConfig cfg;
    cfg.slices_per_period = args.slices;
    cfg.t0 = args.t0;
    const floq::Superoperator uf = floq::floquet_operator(model, cfg);
    const floq::FloquetSpectrum spec = floq::decompose(uf, sopts);
    if (with_ness) {
        const floq::Ness ness = floq::extract_ness(spec, uf, model, cfg, sopts);
        floq::write_text(args.out_path, floq::ness_csv(ness));
        if (args.json_mirror) {
            floq::write_text(args.out_path + ".json", floq::ness_to_json(ness).dump(2) + "\n");
        }
    } else {
        floq::write_text(args.out_path, floq::spectrum_csv(spec));
        if (args.json_mirror) {
            floq::write_text(args.out_path + ".json",
                             floq::spectrum_to_json(spec).dump(2) + "\n");
        }
    }
    return kExitOk;
}

int run_sambe(CommonArgs args)
{
    const floq::ModelFile file = floq::read_model_file(args.model_path);
    args.merge_embedded(file.config);
    const floq::LindbladModel& model = file.model;
    floq::require_valid(model);
    floq::SambeConfig cfg;
    cfg.cutoff = args.cutoff;
    const std::vector<floq::SfEigenmode> modes = floq::solve_sf_lindblad(model, cfg);
    floq::write_text(args.out_path, floq::sambe_csv(modes));
    if (args.json_mirror) {
        floq::write_text(args.out_path + ".json", floq::sambe_to_json(modes).dump(2) + "\n");
    }
    return kExitOk;
}

int run_optics(const CommonArgs& args, bool with_linear)
{
    const floq::BandModelFile file = floq::read_band_model(args.model_path);
    const floq::OpticalResponse resp = floq::sweep(file.model);
    floq::write_text(args.out_path, floq::optics_csv(resp, with_linear, file.beta_defaulted));
    if (args.json_mirror) {
        floq::write_text(args.out_path + ".json",
                         floq::optics_to_json(resp, with_linear).dump(2) + "\n");
    }
    return kExitOk;
}

int run_verify(const CommonArgs& args, std::uint64_t seed, int models)
{
    floq::EnsembleOptions opts;
    opts.seed = seed;
    opts.models = models;
    opts.slices_per_period = args.slices;
    const floq::VerifyReport report = floq::run_theorem_suite(opts);
    const std::string text = report.str();
    std::cout << text;
    if (!args.out_path.empty()) {
        floq::write_text(args.out_path, text);
        if (args.json_mirror) {
            floq::json j;
            j["seed"] = report.seed;
            j["driven_models"] = report.driven_models;
            j["static_models"] = report.static_models;
            j["unitary_models"] = report.unitary_models;
            floq::json checks = floq::json::array();
            for (const auto& c : report.checks) {
                checks.push_back({{"name", c.name},
                                  {"samples", c.samples},
                                  {"worst", c.worst},
                                  {"threshold", c.threshold},
                                  {"pass", c.pass},
                                  {"worst_at", c.worst_at}});
            }
            j["checks"] = checks;
            floq::write_text(args.out_path + ".json", j.dump(2) + "\n");
        }
    }
    return report.all_pass() ? kExitOk : kExitChecksFailed;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Floquet-Lindblad engine: spectra, steady states and optical response "
                 "of periodically driven open quantum systems"};
    app.require_subcommand(1);

    CommonArgs spectrum_args, ness_args, sambe_args, optics_args, verify_args;
    bool optics_linear = false;
    std::uint64_t seed = 1;
    int verify_models = 100;

    CLI::App* spectrum = app.add_subcommand("spectrum", "one-period evolution spectrum to CSV");
    add_io_options(spectrum, spectrum_args);
    spectrum->add_option("--slices", spectrum_args.slices, "propagator slices per period");
    spectrum->add_option("--t0", spectrum_args.t0, "initial time of the stroboscopic map");

    CLI::App* ness = app.add_subcommand("ness", "certified steady state and its trajectory");
    add_io_options(ness, ness_args);
    ness->add_option("--slices", ness_args.slices, "propagator slices per period");
    ness->add_option("--t0", ness_args.t0, "initial time of the stroboscopic map");

    CLI::App* sambe = app.add_subcommand("sambe", "extended-space eigenmode solve");
    add_io_options(sambe, sambe_args);
    sambe->add_option("--cutoff", sambe_args.cutoff, "harmonic cutoff L (keeps -L..L)");

    CLI::App* optics = app.add_subcommand("optics", "two-band response sweep over a k grid");
    add_io_options(optics, optics_args);
    optics->add_flag("--linear", optics_linear, "also export the linear (Omega) response");

    CLI::App* verify = app.add_subcommand("verify", "run the spectral theorem suite on a "
                                                    "seeded random ensemble");
    verify->add_option("--out", verify_args.out_path, "write the report to this path");
    verify->add_option("--seed", seed, "ensemble seed");
    verify->add_option("--models", verify_models, "number of driven ensemble members");
    verify->add_option("--slices", verify_args.slices, "propagator slices per period");
    verify->add_flag("--json", verify_args.json_mirror, "also write <out>.json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    spectrum_args.slices_given = spectrum->count("--slices") > 0;
    spectrum_args.t0_given = spectrum->count("--t0") > 0;
    ness_args.slices_given = ness->count("--slices") > 0;
    ness_args.t0_given = ness->count("--t0") > 0;
    sambe_args.cutoff_given = sambe->count("--cutoff") > 0;

    try {
        if (spectrum->parsed()) return run_spectrum(spectrum_args, /*with_ness=*/false);
        if (ness->parsed()) return run_spectrum(ness_args, /*with_ness=*/true);
        if (sambe->parsed()) return run_sambe(sambe_args);
        if (optics->parsed()) return run_optics(optics_args, optics_linear);
        if (verify->parsed()) return run_verify(verify_args, seed, verify_models);
    } catch (const floq::IoError& e) {
        emit_error_record("io", e.what());
        return kExitIo;
    } catch (const floq::ParseError& e) {
        emit_error_record("parse", e.what());
        return kExitParse;
    } catch (const floq::ValidationError& e) {
        emit_error_record("validation", e.what());
        return kExitValidation;
    } catch (const floq::ConfigError& e) {
        emit_error_record("config", e.what());
        return kExitConfig;
    } catch (const floq::IntegrityError& e) {
        emit_error_record("integrity", e.what());
        return kExitIntegrity;
    } catch (const floq::Error& e) {
        emit_error_record("numerical", e.what());
        return kExitNumerical;
    } catch (const std::exception& e) {
        emit_error_record("internal", e.what());
        return kExitNumerical;
    }
    return kExitUsage;
}
