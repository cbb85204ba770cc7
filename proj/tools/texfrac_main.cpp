// texfrac: volume-radius fractal texture analysis.
//
// Subcommands: signature, dimension, stability, classify, sweep-m, synth.
// Exit codes: 0 success, 1 internal error, 2 bad input or usage.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "texfrac/baselines.hpp"
#include "texfrac/classify.hpp"
#include "texfrac/detail/io_util.hpp"
#include "texfrac/detail/parallel.hpp"
#include "texfrac/gray_image.hpp"
#include "texfrac/height_field.hpp"
#include "texfrac/signature.hpp"
#include "texfrac/synth.hpp"
#include "texfrac/volume_curve.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace texfrac;

namespace {

// Bad input (missing files, malformed data, impossible parameter combos).
struct UserError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CliConfig {
    int r_max = 20;
    double fraction = 0.10;
    std::uint64_t n_centers = 0;  // 0: use fraction
    int m = 10;
    std::uint64_t seed = 0;
    int z_scale = 1;
    std::string method = "vrfd";
    std::string tile;  // "WxH" or empty
    std::string out = ".";
    int threads = 0;  // 0: hardware concurrency
};

std::optional<TileSize> parse_tile(const std::string& s) {
    if (s.empty()) return std::nullopt;
    TileSize t;
    char x = 0;
    std::istringstream is(s);
    if (!(is >> t.width >> x >> t.height) || (x != 'x' && x != 'X') || t.width < 1 || t.height < 1)
        throw UserError("bad --tile value \"" + s + "\", expected WxH");
    return t;
}

std::vector<Method> parse_methods(const std::string& s) {
    if (s == "all") return {Method::Glcm, Method::Fourier, Method::Gabor, Method::Vrfd};
    if (s == "vrfd") return {Method::Vrfd};
    if (s == "fourier") return {Method::Fourier};
    if (s == "glcm") return {Method::Glcm};
    if (s == "gabor") return {Method::Gabor};
    throw UserError("unknown method \"" + s + "\" (vrfd, fourier, glcm, gabor, all)");
}

AnalyzeConfig analyze_config(const CliConfig& cfg) {
    AnalyzeConfig a;
    a.r_max = cfg.r_max;
    a.fraction = cfg.n_centers > 0 ? 0.0 : cfg.fraction;
    a.n_centers = cfg.n_centers;
    a.m = cfg.m;
    a.seed = cfg.seed;
    a.z_scale = cfg.z_scale;
    a.threads = cfg.threads;
    return a;
}

// Provenance line for emitted CSVs. Thread count is deliberately absent:
// results do not depend on it and files must compare byte-equal across runs.
std::string config_comment(const CliConfig& cfg) {
    std::ostringstream os;
    os << "# config: method=" << cfg.method << " r_max=" << cfg.r_max;
    if (cfg.n_centers > 0)
        os << " n_centers=" << cfg.n_centers;
    else
        os << " fraction=" << detail::fmt_double(cfg.fraction);
    os << " m=" << cfg.m << " seed=" << cfg.seed << " z_scale=" << cfg.z_scale
       << " tile=" << (cfg.tile.empty() ? "-" : cfg.tile) << "\n";
    return os.str();
}

GrayImage load_input(const fs::path& path) {
    if (!fs::exists(path)) throw UserError("no such file: " + path.string());
    try {
        return load_pgm(path);
    } catch (const std::exception& e) {
        throw UserError(e.what());
    }
}

SamplingPlan plan_for(const CliConfig& cfg, std::uint64_t seed) {
    return cfg.n_centers > 0 ? SamplingPlan::by_count(cfg.n_centers, seed)
                             : SamplingPlan::by_fraction(cfg.fraction, seed);
}

fs::path ensure_out_dir(const CliConfig& cfg) {
    fs::path dir(cfg.out);
    fs::create_directories(dir);
    return dir;
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (const double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// Population standard deviation, so a single repeat reports exactly 0.
double std_of(const std::vector<double>& v) {
    const double m = mean_of(v);
    double s = 0.0;
    for (const double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size()));
}

void check_loo_ready(const LabeledDataset& ds) {
    if (ds.class_names.size() < 2) throw UserError("dataset needs at least 2 classes");
    std::vector<int> per_class(ds.class_names.size(), 0);
    for (const auto& s : ds.samples) ++per_class[s.class_id];
    for (std::size_t c = 0; c < per_class.size(); ++c) {
        if (per_class[c] < 3)
            throw UserError("class \"" + ds.class_names[c] + "\" has only " +
                            std::to_string(per_class[c]) +
                            " sample(s); leave-one-out needs at least 3");
    }
}

LabeledDataset ingest_or_fail(const fs::path& root, const CliConfig& cfg) {
    std::vector<std::string> warnings;
    LabeledDataset ds;
    try {
        ds = ingest_dataset(root, parse_tile(cfg.tile), &warnings);
    } catch (const UserError&) {
        throw;
    } catch (const std::exception& e) {
        throw UserError(e.what());
    }
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    return ds;
}

// --- subcommands -----------------------------------------------------------

int cmd_signature(const CliConfig& cfg, const std::vector<std::string>& images, bool emit_curves) {
    const RadiiGrid grid = radii_grid(cfg.r_max);
    const std::size_t k = grid.size() / static_cast<std::size_t>(cfg.m);
    const fs::path out_dir = ensure_out_dir(cfg);

    std::ostringstream csv;
    csv << config_comment(cfg);
    csv << "sample_name,class_id,m";
    for (std::size_t j = 1; j <= k; ++j) csv << ",alpha_" << j;
    csv << "\n";

    for (const auto& path : images) {
        const GrayImage img = load_input(path);
        const HeightField field = lift(img);
        const VolumeCurve curve =
            volume_curve(field, plan_for(cfg, cfg.seed), grid, cfg.z_scale, cfg.threads);
        const Signature sig = make_signature(log_log(curve), cfg.m);

        csv << fs::path(path).stem().string() << ",-1," << cfg.m;
        for (const double a : sig.alphas) csv << "," << detail::fmt_double(a);
        csv << "\n";

        if (emit_curves) {
            const fs::path curve_path = out_dir / (fs::path(path).stem().string() + "_curve.csv");
            write_volume_csv(curve, field, curve_path);
        }
    }

    const fs::path sig_path = out_dir / "signatures.csv";
    detail::atomic_write(sig_path, csv.str());
    std::cout << "wrote " << sig_path.string() << " (" << images.size() << " image(s), k=" << k
              << ")\n";
    return 0;
}

int cmd_dimension(const CliConfig& cfg, const std::string& image, int repeats) {
    if (repeats < 1) throw UserError("--repeats must be >= 1");
    const GrayImage img = load_input(image);
    const HeightField field = lift(img);
    const RadiiGrid grid = radii_grid(cfg.r_max);

    std::vector<double> ds(repeats);
    detail::parallel_for(static_cast<std::size_t>(repeats), cfg.threads,
                         [&](int, std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
            const VolumeCurve curve =
                volume_curve(field, plan_for(cfg, cfg.seed + r), grid, cfg.z_scale, 1);
            ds[r] = fractal_dimension(log_log(curve));
        }
    });

    std::ostringstream csv;
    csv << config_comment(cfg);
    csv << "repeat,seed,D\n";
    for (int r = 0; r < repeats; ++r)
        csv << r << "," << cfg.seed + r << "," << detail::fmt_double(ds[r]) << "\n";
    const fs::path out = ensure_out_dir(cfg) / "dimension.csv";
    detail::atomic_write(out, csv.str());

    std::cout << "D mean=" << detail::fmt_double(mean_of(ds)) << " std=" << detail::fmt_double(std_of(ds))
              << " repeats=" << repeats << "\n";
    return 0;
}

int cmd_stability(const CliConfig& cfg, const std::string& image, std::vector<double> fractions,
                  int repeats) {
    if (repeats < 1) throw UserError("--repeats must be >= 1");
    if (fractions.empty()) fractions = {0.01, 0.05, 0.10, 0.20};
    for (const double f : fractions)
        if (!(f > 0.0 && f <= 1.0)) throw UserError("fractions must lie in (0, 1]");

    const GrayImage img = load_input(image);
    const HeightField field = lift(img);
    const RadiiGrid grid = radii_grid(cfg.r_max);

    std::ostringstream csv;
    csv << config_comment(cfg);
    csv << "fraction,mean_D,std_D\n";
    for (const double f : fractions) {
        std::vector<double> ds(repeats);
        detail::parallel_for(static_cast<std::size_t>(repeats), cfg.threads,
                             [&](int, std::size_t begin, std::size_t end) {
            for (std::size_t r = begin; r < end; ++r) {
                const VolumeCurve curve = volume_curve(
                    field, SamplingPlan::by_fraction(f, cfg.seed + r), grid, cfg.z_scale, 1);
                ds[r] = fractal_dimension(log_log(curve));
            }
        });
        csv << detail::fmt_double(f) << "," << detail::fmt_double(mean_of(ds)) << ","
            << detail::fmt_double(std_of(ds)) << "\n";
        std::cout << "fraction " << detail::fmt_double(f) << ": mean D " << detail::fmt_double(mean_of(ds))
                  << " std " << detail::fmt_double(std_of(ds)) << "\n";
    }
    const fs::path out = ensure_out_dir(cfg) / "stability.csv";
    detail::atomic_write(out, csv.str());
    std::cout << "wrote " << out.string() << "\n";
    return 0;
}

int cmd_classify(const CliConfig& cfg, const std::string& root) {
    const LabeledDataset ds = ingest_or_fail(root, cfg);
    check_loo_ready(ds);
    const auto methods = parse_methods(cfg.method);

    std::vector<MethodResult> results;
    try {
        results = compare_methods(ds, methods, analyze_config(cfg));
    } catch (const std::invalid_argument& e) {
        throw UserError(e.what());
    }

    const fs::path out_dir = ensure_out_dir(cfg);
    std::ostringstream table, csv;
    csv << config_comment(cfg);
    csv << "method,correct,total,success_rate_pct\n";
    table << "Method            Images correctly classified  Success rate (%)\n";
    for (const auto& r : results) {
        char line[128];
        std::snprintf(line, sizeof line, "%-17s %27lld %17.2f\n", method_name(r.method).c_str(),
                      static_cast<long long>(r.correct), r.success_rate);
        table << line;
        csv << method_name(r.method) << "," << r.correct << "," << r.total << ","
            << detail::fmt_double(r.success_rate) << "\n";

        std::ostringstream conf;
        conf << config_comment(cfg);
        conf << "true_class";
        for (const auto& name : ds.class_names) conf << "," << name;
        conf << "\n";
        for (int t = 0; t < r.confusion.classes; ++t) {
            conf << ds.class_names[t];
            for (int p = 0; p < r.confusion.classes; ++p) conf << "," << r.confusion.at(t, p);
            conf << "\n";
        }
        detail::atomic_write(out_dir / ("confusion_" + method_name(r.method) + ".csv"), conf.str());
    }
    table << "(" << ds.samples.size() << " samples, " << ds.class_names.size() << " classes)\n";
    std::cout << table.str();
    detail::atomic_write(out_dir / "comparison.csv", csv.str());
    return 0;
}

int cmd_sweep_m(const CliConfig& cfg, const std::string& root, std::vector<int> m_list) {
    if (m_list.empty()) m_list = {5, 10, 15, 20};
    for (const int m : m_list)
        if (m < 2) throw UserError("every m must be >= 2");

    const LabeledDataset ds = ingest_or_fail(root, cfg);
    check_loo_ready(ds);
    const RadiiGrid grid = radii_grid(cfg.r_max);

    // The log-log curves do not depend on m; compute once, slice per m.
    std::vector<LogLogCurve> curves(ds.samples.size());
    detail::parallel_for(ds.samples.size(), cfg.threads,
                         [&](int, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            curves[i] = log_log(volume_curve(lift(ds.samples[i].image), plan_for(cfg, cfg.seed),
                                             grid, cfg.z_scale, 1));
        }
    });

    std::ostringstream csv;
    csv << config_comment(cfg);
    csv << "m,correct,total,accuracy_pct\n";
    for (const int m : m_list) {
        if (static_cast<std::size_t>(m) > grid.size())
            throw UserError("m=" + std::to_string(m) + " exceeds curve length " +
                            std::to_string(grid.size()));
        std::vector<LabeledFeature> features(ds.samples.size());
        for (std::size_t i = 0; i < ds.samples.size(); ++i) {
            features[i].features.values = make_signature(curves[i], m).alphas;
            features[i].features.method_tag = "vrfd";
            features[i].class_id = ds.samples[i].class_id;
        }
        ConfusionMatrix cm;
        try {
            cm = leave_one_out(features, cfg.threads);
        } catch (const std::invalid_argument& e) {
            throw UserError(e.what());
        }
        csv << m << "," << cm.trace() << "," << cm.total() << ","
            << detail::fmt_double(100.0 * cm.accuracy()) << "\n";
        std::cout << "m=" << m << ": " << cm.trace() << "/" << cm.total() << " ("
                  << detail::fmt_double(100.0 * cm.accuracy()) << "%)\n";
    }
    const fs::path out = ensure_out_dir(cfg) / "sweep_m.csv";
    detail::atomic_write(out, csv.str());
    std::cout << "wrote " << out.string() << "\n";
    return 0;
}

int cmd_synth(const CliConfig& cfg, int width, int height, int samples, std::uint64_t base_seed) {
    if (width < 1 || height < 1) throw UserError("--size must be positive");
    if (samples < 3) throw UserError("--samples must be >= 3");
    const LabeledDataset ds =
        make_synth_dataset(default_synth_classes(width, height), samples, base_seed);

    const fs::path out_dir = ensure_out_dir(cfg);
    for (const auto& s : ds.samples) {
        const fs::path dir = out_dir / ds.class_names[s.class_id];
        fs::create_directories(dir);
        const auto slash = s.name.find('/');
        save_pgm(s.image, dir / (s.name.substr(slash + 1) + ".pgm"));
    }
    std::cout << "wrote " << ds.class_names.size() << " classes x " << samples << " samples to "
              << out_dir.string() << "\n";
    return 0;
}

// --- config plumbing --------------------------------------------------------

json load_config_file(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw UserError("cannot open config file: " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw UserError("bad config file " + path + ": " + e.what());
    }
}

// Precedence: explicit flags > config file > defaults.
template <typename T>
void overlay(const CLI::Option* opt, T& value, const json& j, const char* key) {
    if (opt != nullptr && opt->count() > 0) return;  // flag wins
    if (j.contains(key)) {
        try {
            value = j.at(key).get<T>();
        } catch (const json::exception& e) {
            throw UserError(std::string("bad config value for \"") + key + "\": " + e.what());
        }
    }
}

struct CommonOpts {
    CLI::Option* r_max = nullptr;
    CLI::Option* fraction = nullptr;
    CLI::Option* n_centers = nullptr;
    CLI::Option* m = nullptr;
    CLI::Option* seed = nullptr;
    CLI::Option* z_scale = nullptr;
    CLI::Option* method = nullptr;
    CLI::Option* tile = nullptr;
    CLI::Option* out = nullptr;
    CLI::Option* threads = nullptr;
    CLI::Option* config = nullptr;
    std::string config_path;
};

CommonOpts add_common(CLI::App* sub, CliConfig& cfg) {
    CommonOpts o;
    o.r_max = sub->add_option("--r-max", cfg.r_max, "maximum sphere radius (default 20)");
    o.fraction = sub->add_option("--fraction", cfg.fraction,
                                 "fraction of pixels used as sphere centers (default 0.10)");
    o.n_centers = sub->add_option("--n-centers", cfg.n_centers,
                                  "absolute number of sphere centers (overrides --fraction)");
    o.m = sub->add_option("--m", cfg.m, "points per signature segment (default 10)");
    o.seed = sub->add_option("--seed", cfg.seed, "RNG seed (default 0)");
    o.z_scale = sub->add_option("--z-scale", cfg.z_scale,
                                "integer multiplier for the gray-level axis (default 1)");
    o.method = sub->add_option("--method", cfg.method, "vrfd, fourier, glcm, gabor or all");
    o.tile = sub->add_option("--tile", cfg.tile, "cut dataset images into WxH tiles");
    o.out = sub->add_option("--out", cfg.out, "output directory (default .)");
    o.threads = sub->add_option("--threads", cfg.threads, "worker threads (default: all cores)");
    o.config = sub->add_option("--config", o.config_path, "JSON config file (flags win)");
    return o;
}

void apply_config_file(const CommonOpts& o, CliConfig& cfg) {
    const json j = load_config_file(o.config_path);
    overlay(o.r_max, cfg.r_max, j, "r_max");
    overlay(o.fraction, cfg.fraction, j, "fraction");
    overlay(o.n_centers, cfg.n_centers, j, "n_centers");
    overlay(o.m, cfg.m, j, "m");
    overlay(o.seed, cfg.seed, j, "seed");
    overlay(o.z_scale, cfg.z_scale, j, "z_scale");
    overlay(o.method, cfg.method, j, "method");
    overlay(o.tile, cfg.tile, j, "tile");
    overlay(o.out, cfg.out, j, "out");
    overlay(o.threads, cfg.threads, j, "threads");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"volume-radius fractal texture analysis"};
    app.require_subcommand(1);

    CliConfig cfg;

    auto* sig = app.add_subcommand("signature", "piecewise-slope signatures for images");
    std::vector<std::string> sig_images;
    bool emit_curves = false;
    sig->add_option("images", sig_images, "input PGM files")->required();
    sig->add_flag("--emit-curves", emit_curves, "also write per-image volume-curve CSVs");
    const CommonOpts sig_opts = add_common(sig, cfg);

    auto* dim = app.add_subcommand("dimension", "fractal dimension statistics for one image");
    std::string dim_image;
    int dim_repeats = 1;
    dim->add_option("image", dim_image, "input PGM file")->required();
    dim->add_option("--repeats", dim_repeats, "number of runs with seeds seed..seed+n-1");
    const CommonOpts dim_opts = add_common(dim, cfg);

    auto* stab = app.add_subcommand("stability", "D stability across center fractions");
    std::string stab_image;
    std::vector<double> stab_fractions;
    int stab_repeats = 30;
    stab->add_option("image", stab_image, "input PGM file")->required();
    stab->add_option("--fractions", stab_fractions, "center fractions to sweep")
        ->delimiter(',');
    stab->add_option("--repeats", stab_repeats, "runs per fraction (default 30)");
    const CommonOpts stab_opts = add_common(stab, cfg);

    auto* cls = app.add_subcommand("classify", "LDA leave-one-out over a dataset directory");
    std::string cls_root;
    cls->add_option("dataset", cls_root, "dataset root (class subdirectories of PGMs)")
        ->required();
    const CommonOpts cls_opts = add_common(cls, cfg);

    auto* sweep = app.add_subcommand("sweep-m", "classification accuracy as a function of m");
    std::string sweep_root;
    std::vector<int> sweep_ms;
    sweep->add_option("dataset", sweep_root, "dataset root")->required();
    sweep->add_option("--m-list", sweep_ms, "m values to sweep")->delimiter(',');
    const CommonOpts sweep_opts = add_common(sweep, cfg);

    auto* synth = app.add_subcommand("synth", "emit the synthetic benchmark dataset");
    std::string synth_size = "64x64";
    int synth_samples = 10;
    std::uint64_t synth_base_seed = 0;
    synth->add_option("--size", synth_size, "sample size WxH (default 64x64)");
    synth->add_option("--samples", synth_samples, "samples per class (default 10)");
    synth->add_option("--base-seed", synth_base_seed, "dataset base seed (default 0)");
    const CommonOpts synth_opts = add_common(synth, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sig->parsed()) {
            apply_config_file(sig_opts, cfg);
            return cmd_signature(cfg, sig_images, emit_curves);
        }
        if (dim->parsed()) {
            apply_config_file(dim_opts, cfg);
            return cmd_dimension(cfg, dim_image, dim_repeats);
        }
        if (stab->parsed()) {
            apply_config_file(stab_opts, cfg);
            return cmd_stability(cfg, stab_image, stab_fractions, stab_repeats);
        }
        if (cls->parsed()) {
            apply_config_file(cls_opts, cfg);
            return cmd_classify(cfg, cls_root);
        }
        if (sweep->parsed()) {
            apply_config_file(sweep_opts, cfg);
            return cmd_sweep_m(cfg, sweep_root, sweep_ms);
        }
        if (synth->parsed()) {
            apply_config_file(synth_opts, cfg);
            TileSize t;
            char x = 0;
            std::istringstream is(synth_size);
            if (!(is >> t.width >> x >> t.height) || (x != 'x' && x != 'X'))
                throw UserError("bad --size value \"" + synth_size + "\", expected WxH");
            return cmd_synth(cfg, t.width, t.height, synth_samples, synth_base_seed);
        }
    } catch (const UserError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
