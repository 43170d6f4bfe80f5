#include "cli.hpp"

#include "omnitile/error.hpp"
#include "omnitile/image_io.hpp"
#include "omnitile/layout.hpp"
#include "omnitile/metrics.hpp"
#include "omnitile/optimizer.hpp"
#include "omnitile/projector.hpp"
#include "omnitile/scheme.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

namespace omnitile::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Size {
    int width = 0;
    int height = 0;
};

// Flags of every subcommand. CLI11 binds to these before parsing.
struct Config {
    // scheme selection
    std::string scheme;
    std::string cuts;
    int tiles = 0;
    std::string pole = "square";
    double overlap = 0.0;
    int max_tiles = 51;

    std::string input;
    std::string output;
    std::string in_format = "equirect";
    std::string out_format = "png";
    std::string size;
    std::string manifest;
    std::string encoder_cmd;
    bool pack = false;
    bool blend = false;
    int width = 0;
    int height = 0;

    std::string ref;
    std::string test;
    std::string anchor;
    std::string weights;
    std::size_t samples = kDefaultSampleCount;
    bool chroma = false;

    bool json = false;
};

double rounded(double v, int digits) {
    const double scale = std::pow(10.0, digits);
    return std::round(v * scale) / scale;
}

json json_number(double v, int digits) {
    if (!std::isfinite(v)) {
        return nullptr;
    }
    return rounded(v, digits);
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError(fmt::format("cannot open '{}' for reading", path.string()));
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !(out << text)) {
        throw IoError(fmt::format("cannot write '{}'", path.string()));
    }
}

bool is_yuv(const fs::path& p) {
    auto ext = p.extension().string();
    std::ranges::transform(ext, ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".yuv";
}

std::optional<Size> parse_size(const std::string& text) {
    if (text.empty()) {
        return std::nullopt;
    }
    Size s;
    char x = 0;
    std::istringstream in(text);
    std::string rest;
    if (!(in >> s.width >> x >> s.height) || (x != 'x' && x != 'X') || (in >> rest) || s.width <= 0 ||
        s.height <= 0) {
        throw UsageError(fmt::format("--size expects WIDTHxHEIGHT, got '{}'", text));
    }
    return s;
}

PoleStyle pole_of(const Config& c) {
    return parse_pole_style(c.pole);
}

double sigma_of(const Config& c) {
    if (!(c.overlap >= 0.0) || !std::isfinite(c.overlap)) {
        throw UsageError(fmt::format("--overlap must be a non-negative percentage, got {}", c.overlap));
    }
    return c.overlap / 100.0;
}

int cuts_for_tiles(int tiles) {
    if (tiles < 3 || tiles % 2 == 0) {
        throw UsageError(
            fmt::format("--tiles must be odd and at least 3 (two pole caps around 2n-1 bands), got {}", tiles));
    }
    return (tiles - 1) / 2;
}

std::string cut_line(const TileScheme& s) {
    std::string line;
    const auto deg = s.cuts_degrees();
    for (std::size_t i = 0; i < deg.size(); ++i) {
        line += fmt::format("{}θ{}={:.2f}°", i ? " " : "", i + 1, deg[i]);
    }
    return line;
}

std::vector<double> parse_cut_list(const std::string& text) {
    std::vector<double> cuts;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            cuts.push_back(std::stod(item, &used));
            if (item.find_first_not_of(" \t", used) != std::string::npos) {
                throw std::invalid_argument(item);
            }
        } catch (const std::exception&) {
            throw UsageError(fmt::format("--cuts expects comma-separated degrees, got '{}'", text));
        }
    }
    if (cuts.empty()) {
        throw UsageError("--cuts needs at least one angle");
    }
    return cuts;
}

// Parses everything the scheme flags can be checked for without touching
// the file system.
void validate_scheme_flags(const Config& c) {
    (void)pole_of(c);
    (void)sigma_of(c);
    if (c.scheme.empty() && c.cuts.empty() && c.tiles == 0) {
        throw UsageError("one of --scheme, --cuts or --tiles is required");
    }
    if (!c.cuts.empty()) {
        (void)parse_cut_list(c.cuts);
    }
    if (c.tiles != 0) {
        (void)cuts_for_tiles(c.tiles);
    }
}

TileScheme resolve_scheme(const Config& c) {
    if (!c.scheme.empty()) {
        const auto first = c.scheme.find_first_not_of(" \t\r\n");
        const bool inline_doc = first != std::string::npos && c.scheme[first] == '{';
        return parse_scheme(inline_doc ? c.scheme : read_text(c.scheme)).to_scheme();
    }
    if (!c.cuts.empty()) {
        return TileScheme::from_degrees(parse_cut_list(c.cuts), pole_of(c), sigma_of(c));
    }
    return optimize_cuts(cuts_for_tiles(c.tiles), pole_of(c), sigma_of(c)).scheme;
}

std::vector<PlanarImage> load_frames(const fs::path& path, const std::optional<Size>& size) {
    if (is_yuv(path)) {
        return read_yuv420(path, size->width, size->height);
    }
    return {read_image(path)};
}

void require_size_for_yuv(const std::string& path, const std::optional<Size>& size, const char* flag) {
    if (is_yuv(path) && !size) {
        throw UsageError(fmt::format("raw YUV input '{}' needs {} WIDTHxHEIGHT", path, flag));
    }
}

std::string image_ext(const PlanarImage& img, bool yuv, const std::string& format) {
    if (yuv) {
        return ".yuv";
    }
    if (format == "ppm") {
        return img.plane_count() == 1 ? ".pgm" : ".ppm";
    }
    return ".png";
}

void save_frames(const fs::path& path, std::span<const PlanarImage> frames) {
    if (is_yuv(path)) {
        write_yuv420(path, frames);
    } else if (frames.size() != 1) {
        throw FormatError(fmt::format("'{}': {} frames need a .yuv output", path.string(), frames.size()));
    } else {
        write_image(path, frames.front());
    }
}

std::string tile_stem(int id) {
    return fmt::format("tile_{:02d}", id);
}

std::string substitute(std::string text, const std::string& key, const std::string& value) {
    for (std::size_t pos = text.find(key); pos != std::string::npos; pos = text.find(key, pos + value.size())) {
        text.replace(pos, key.size(), value);
    }
    return text;
}

std::string shell_quote(const std::string& s) {
    std::string q = "'";
    for (char ch : s) {
        q += ch == '\'' ? std::string("'\\''") : std::string(1, ch);
    }
    return q + "'";
}

// ---- commands ----

int cmd_optimize(const Config& c, std::ostream& out, std::ostream& err) {
    const int n = cuts_for_tiles(c.tiles);
    const auto pole = pole_of(c);
    const double sigma = sigma_of(c);
    const auto r = optimize_cuts(n, pole, sigma);
    if (c.json) {
        json doc;
        doc["tiles"] = c.tiles;
        doc["pole"] = to_string(pole);
        doc["overlap_percent"] = c.overlap;
        doc["cuts_deg"] = json::array();
        for (double d : r.scheme.cuts_degrees()) {
            doc["cuts_deg"].push_back(rounded(d, 6));
        }
        doc["area_ratio"] = rounded(r.area.ratio_to_sphere, 6);
        doc["converged"] = r.converged;
        out << doc.dump(2) << '\n';
    } else {
        out << cut_line(r.scheme) << '\n';
        out << fmt::format("area={:.2f}% of sphere (ratio {:.6f})\n", 100.0 * r.area.ratio_to_sphere,
                           r.area.ratio_to_sphere);
    }
    if (!r.converged) {
        err << fmt::format("warning: optimizer stopped with gradient {:.3g} after {} iterations\n", r.max_gradient,
                           r.iterations);
    }
    return kExitOk;
}

int cmd_best(const Config& c, std::ostream& out) {
    const int max_cuts = cuts_for_tiles(c.max_tiles);
    const auto r = best_tilecount(sigma_of(c), pole_of(c), max_cuts);
    const int tiles = static_cast<int>(r.scheme.tile_count());
    if (c.json) {
        json doc;
        doc["pole"] = to_string(r.scheme.pole());
        doc["overlap_percent"] = c.overlap;
        doc["max_tiles"] = c.max_tiles;
        doc["tiles"] = tiles;
        doc["cuts_deg"] = json::array();
        for (double d : r.scheme.cuts_degrees()) {
            doc["cuts_deg"].push_back(rounded(d, 6));
        }
        doc["area_ratio"] = rounded(r.area.ratio_to_sphere, 6);
        out << doc.dump(2) << '\n';
    } else {
        out << fmt::format("{} tiles: area={:.2f}% of sphere\n", tiles, 100.0 * r.area.ratio_to_sphere);
        out << cut_line(r.scheme) << '\n';
    }
    return kExitOk;
}

int cmd_area_curve(const Config& c, std::ostream& out) {
    const auto curve = area_vs_tilecount(cuts_for_tiles(c.max_tiles), pole_of(c), sigma_of(c));
    if (c.json) {
        json doc;
        doc["pole"] = c.pole;
        doc["overlap_percent"] = c.overlap;
        doc["points"] = json::array();
        for (const auto& [n, ratio] : curve) {
            doc["points"].push_back({{"tiles", 2 * n + 1}, {"area_ratio", rounded(ratio, 6)}});
        }
        out << doc.dump(2) << '\n';
    } else {
        out << "tiles  area\n";
        for (const auto& [n, ratio] : curve) {
            out << fmt::format("{:5d}  {:.2f}%\n", 2 * n + 1, 100.0 * ratio);
        }
    }
    return kExitOk;
}

int cmd_compare_area(const Config& c, std::ostream& out) {
    const auto proposed = optimize_cuts(2, PoleStyle::Square, 0.0);
    const std::vector<double> yu_cuts{deg2rad(30.0), deg2rad(60.0)};
    const std::vector<std::pair<std::string, double>> rows{
        {"equirectangular", baseline_ratio(BaselineProjection::Equirectangular)},
        {"cubic", baseline_ratio(BaselineProjection::Cubic)},
        {"yu-style 5-tile", yu_scheme_ratio(yu_cuts)},
        {"proposed 5-tile", proposed.area.ratio_to_sphere},
    };
    if (c.json) {
        json doc;
        doc["rows"] = json::array();
        for (const auto& [name, ratio] : rows) {
            doc["rows"].push_back(
                {{"projection", name}, {"area_ratio", rounded(ratio, 6)}, {"percent", rounded(100.0 * ratio, 2)}});
        }
        doc["proposed_cuts_deg"] = json::array();
        for (double d : proposed.scheme.cuts_degrees()) {
            doc["proposed_cuts_deg"].push_back(rounded(d, 6));
        }
        doc["yu_cuts_deg"] = {30.0, 60.0};
        out << doc.dump(2) << '\n';
    } else {
        out << "projection        area of sphere\n";
        for (const auto& [name, ratio] : rows) {
            out << fmt::format("{:<16}  {:7.2f}%\n", name, 100.0 * ratio);
        }
        out << fmt::format("(yu-style cuts at 30/60 deg, unrolled poles; proposed: {}, square pole)\n",
                           cut_line(proposed.scheme));
    }
    return kExitOk;
}

int cmd_project(const Config& c, std::ostream& out) {
    validate_scheme_flags(c);
    const auto size = parse_size(c.size);
    require_size_for_yuv(c.input, size, "--size");
    if (!c.encoder_cmd.empty() && !c.pack) {
        throw UsageError("--encoder-cmd needs --pack");
    }

    const auto scheme = resolve_scheme(c);
    const auto frames = load_frames(c.input, size);
    const auto& first = frames.front();
    DensityRule density = DensityRule::from_equirect_height(first.height());
    if (c.in_format == "cubic") {
        if (first.width() * 2 != first.height() * 3) {
            throw GeometryMismatch(fmt::format("cubic input must be a 3x2 face grid, got {}x{}", first.width(),
                                               first.height()));
        }
        density = DensityRule{first.height() / 4.0};
    }
    const auto plan = plan_tiles(scheme, density);
    const auto manifest = pack(plan);

    std::vector<std::vector<PlanarImage>> tiles_per_frame;
    for (const auto& f : frames) {
        if (f.width() != first.width() || f.height() != first.height()) {
            throw GeometryMismatch("all input frames must share one size");
        }
        if (c.in_format == "cubic") {
            tiles_per_frame.push_back(render_tiles(CubicSource(f), plan));
        } else {
            tiles_per_frame.push_back(render_tiles(EquirectSource(f), plan));
        }
    }

    const fs::path dir = c.output;
    fs::create_directories(dir);
    write_text(dir / "manifest.json", serialize_manifest(manifest) + "\n");
    const bool yuv = is_yuv(c.input);
    const std::string ext = image_ext(first, yuv, c.out_format);

    if (c.pack) {
        std::vector<PlanarImage> canvases;
        for (const auto& tiles : tiles_per_frame) {
            canvases.push_back(compose_canvas(tiles, manifest));
        }
        const fs::path canvas_path = dir / ("canvas" + ext);
        save_frames(canvas_path, canvases);
        out << fmt::format("packed {} tiles into {}x{} canvas ({} frame{}, waste {:.1f}%) -> {}\n",
                           plan.tiles.size(), manifest.canvas_w, manifest.canvas_h, canvases.size(),
                           canvases.size() == 1 ? "" : "s", 100.0 * manifest.waste_ratio(), canvas_path.string());
        if (!c.encoder_cmd.empty()) {
            std::string cmd = c.encoder_cmd;
            cmd = substitute(cmd, "{input}", shell_quote(canvas_path.string()));
            cmd = substitute(cmd, "{dir}", shell_quote(dir.string()));
            cmd = substitute(cmd, "{width}", std::to_string(manifest.canvas_w));
            cmd = substitute(cmd, "{height}", std::to_string(manifest.canvas_h));
            out.flush();
            const int status = std::system(cmd.c_str());
            if (status != 0) {
                throw std::runtime_error(fmt::format("encoder command failed with status {}", status));
            }
        }
    } else {
        for (const auto& t : plan.tiles) {
            std::vector<PlanarImage> seq;
            for (const auto& tiles : tiles_per_frame) {
                seq.push_back(tiles[static_cast<std::size_t>(t.id)]);
            }
            save_frames(dir / (tile_stem(t.id) + ext), seq);
        }
        out << fmt::format("wrote {} tiles ({} frame{}) -> {}\n", plan.tiles.size(), frames.size(),
                           frames.size() == 1 ? "" : "s", dir.string());
    }
    out << cut_line(scheme) << fmt::format(" pole={} overlap={}%\n", to_string(scheme.pole()), 100.0 * scheme.sigma());
    return kExitOk;
}

// Tiles of one frame sequence read from tile_XX.* files in a directory.
std::vector<std::vector<PlanarImage>> load_tile_dir(const fs::path& dir, const TilePlan& plan) {
    std::vector<std::vector<PlanarImage>> per_tile;
    for (const auto& t : plan.tiles) {
        std::optional<fs::path> found;
        for (const char* ext : {".png", ".ppm", ".pgm", ".yuv"}) {
            if (fs::exists(dir / (tile_stem(t.id) + ext))) {
                found = dir / (tile_stem(t.id) + ext);
                break;
            }
        }
        if (!found) {
            throw IoError(fmt::format("'{}' has no image for tile {}", dir.string(), t.id));
        }
        per_tile.push_back(load_frames(*found, Size{t.width_px, t.height_px}));
    }
    const auto frames = per_tile.front().size();
    std::vector<std::vector<PlanarImage>> per_frame(frames);
    for (auto& seq : per_tile) {
        if (seq.size() != frames) {
            throw GeometryMismatch("tile files hold different frame counts");
        }
        for (std::size_t f = 0; f < frames; ++f) {
            per_frame[f].push_back(std::move(seq[f]));
        }
    }
    return per_frame;
}

int cmd_unproject(const Config& c, std::ostream& out) {
    if (c.width < 0 || c.height < 0) {
        throw UsageError("--width and --height must be positive");
    }
    const auto manifest = parse_manifest(read_text(c.manifest));
    const auto plan = plan_from_manifest(manifest);
    const int height = c.height > 0 ? c.height : static_cast<int>(std::lround(manifest.density_ppr * kPi));
    const int width = c.width > 0 ? c.width : 2 * height;

    std::vector<std::vector<PlanarImage>> tiles_per_frame;
    if (fs::is_directory(c.input)) {
        tiles_per_frame = load_tile_dir(c.input, plan);
    } else {
        if (is_yuv(c.input)) {
            // Upsample chroma per tile so neighbours in the canvas do not
            // bleed into each other; placements sit on even coordinates.
            const auto canvases =
                read_yuv420(c.input, manifest.canvas_w, manifest.canvas_h, ChromaUpsampling::Replicate);
            for (const auto& canvas : canvases) {
                auto tiles = unpack(canvas, manifest);
                for (auto& t : tiles) {
                    t = yuv420_to_planar(planar_to_yuv420(t), t.width(), t.height());
                }
                tiles_per_frame.push_back(std::move(tiles));
            }
        } else {
            for (const auto& canvas : load_frames(c.input, std::nullopt)) {
                tiles_per_frame.push_back(unpack(canvas, manifest));
            }
        }
    }
    std::vector<PlanarImage> result;
    for (const auto& tiles : tiles_per_frame) {
        result.push_back(c.blend ? blend_overlaps(tiles, plan, width, height)
                                 : tiles_to_equirect(tiles, plan, width, height));
    }
    save_frames(c.output, result);
    out << fmt::format("reconstructed {}x{} equirect ({} frame{}{}) -> {}\n", width, height, result.size(),
                       result.size() == 1 ? "" : "s", c.blend ? ", blended" : "", c.output);
    return kExitOk;
}

int cmd_sphere_metric(const Config& c, std::ostream& out, bool latitude) {
    const auto size = parse_size(c.size);
    require_size_for_yuv(c.ref, size, "--size");
    require_size_for_yuv(c.test, size, "--size");
    if (c.samples < 2) {
        throw UsageError("--samples must be at least 2");
    }
    const auto weights = !latitude      ? WeightTable::uniform()
                         : c.weights.empty() ? WeightTable::cos_latitude()
                                             : parse_weight_table(read_text(c.weights));
    const auto ref = load_frames(c.ref, size);
    const auto test = load_frames(c.test, size);
    if (ref.size() != test.size()) {
        throw GeometryMismatch(fmt::format("reference has {} frames, test has {}", ref.size(), test.size()));
    }
    const auto samples = build_sampleset(c.samples);
    const MetricOptions opts{c.chroma};
    std::vector<double> values;
    for (std::size_t f = 0; f < ref.size(); ++f) {
        values.push_back(latitude ? lpsnr(ref[f], test[f], samples, weights, opts)
                                  : spsnr(ref[f], test[f], samples, opts));
    }
    double mean = 0.0;
    for (double v : values) {
        mean += v;
    }
    mean /= static_cast<double>(values.size());

    const std::string name = latitude ? "L-PSNR" : "S-PSNR";
    if (c.json) {
        json doc;
        doc["metric"] = latitude ? "lpsnr" : "spsnr";
        doc["samples"] = c.samples;
        doc["chroma"] = c.chroma;
        doc["frames"] = json::array();
        for (double v : values) {
            doc["frames"].push_back(json_number(v, 6));
        }
        doc["mean_db"] = json_number(mean, 6);
        out << doc.dump(2) << '\n';
    } else {
        if (values.size() > 1) {
            for (std::size_t f = 0; f < values.size(); ++f) {
                out << fmt::format("frame {}: {} {:.4f} dB\n", f, name, values[f]);
            }
        }
        out << fmt::format("{} {:.4f} dB\n", name, mean);
    }
    return kExitOk;
}

int cmd_bdrate(const Config& c, std::ostream& out) {
    const auto anchor = parse_rd_csv(read_text(c.anchor));
    const auto test = parse_rd_csv(read_text(c.test));
    double value = 0.0;
    try {
        value = bd_rate(anchor, test);
    } catch (const std::invalid_argument& e) {
        throw FormatError(e.what());
    }
    if (c.json) {
        json doc;
        doc["metric"] = "bdrate";
        doc["bd_rate_percent"] = rounded(value, 6);
        out << doc.dump(2) << '\n';
    } else {
        out << fmt::format("BD-rate {:+.4f}%\n", value);
    }
    return kExitOk;
}

void add_scheme_flags(CLI::App* app, Config& c, bool with_sources) {
    app->add_option("--pole", c.pole, "pole cap style")->check(CLI::IsMember({"circle", "square"}));
    app->add_option("--overlap", c.overlap, "overlap in percent (0.5 means sigma = 0.005)");
    if (with_sources) {
        auto* scheme = app->add_option("--scheme", c.scheme, "scheme JSON file, inline JSON or a manifest");
        auto* cuts = app->add_option("--cuts", c.cuts, "cut latitudes in degrees, comma separated");
        auto* tiles = app->add_option("--tiles", c.tiles, "optimize cuts for this odd tile count");
        scheme->excludes(cuts)->excludes(tiles);
        cuts->excludes(tiles);
    }
}

} // namespace

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    Config c;
    CLI::App app{"Tile-based segmentation of omnidirectional frames"};
    app.name("omnitile");
    app.require_subcommand(1);

    auto* optimize = app.add_subcommand("optimize", "optimal cut latitudes for a tile count");
    optimize->add_option("--tiles", c.tiles, "odd tile count >= 3")->required();
    add_scheme_flags(optimize, c, false);
    optimize->add_flag("--json", c.json);

    auto* best = app.add_subcommand("best", "tile count with the least area for an overlap");
    best->add_option("--max-tiles", c.max_tiles, "largest odd tile count considered")->capture_default_str();
    add_scheme_flags(best, c, false);
    best->add_flag("--json", c.json);

    auto* curve = app.add_subcommand("area-curve", "optimal area ratio against tile count");
    curve->add_option("--max-tiles", c.max_tiles, "largest odd tile count")->capture_default_str();
    add_scheme_flags(curve, c, false);
    curve->add_flag("--json", c.json);

    auto* compare = app.add_subcommand("compare-area", "area of equirect, cubic, yu-style and proposed schemes");
    compare->add_flag("--json", c.json);

    auto* project = app.add_subcommand("project", "cut a frame into tiles");
    project->add_option("--input", c.input, "equirect or cubic image (.png .ppm .pgm .yuv)")->required();
    project->add_option("--in-format", c.in_format)->check(CLI::IsMember({"equirect", "cubic"}))->capture_default_str();
    project->add_option("--size", c.size, "WIDTHxHEIGHT of raw YUV input");
    project->add_option("--output", c.output, "output directory")->required();
    project->add_option("--format", c.out_format, "tile image format")->check(CLI::IsMember({"png", "ppm"}))->capture_default_str();
    project->add_flag("--pack", c.pack, "pack tiles into one canvas");
    project->add_option("--encoder-cmd", c.encoder_cmd,
                        "shell command run on the packed canvas; {input} {dir} {width} {height} are substituted");
    add_scheme_flags(project, c, true);

    auto* unproject = app.add_subcommand("unproject", "rebuild an equirect frame from tiles");
    unproject->add_option("--input", c.input, "packed canvas or directory of tile_XX files")->required();
    unproject->add_option("--manifest", c.manifest)->required();
    unproject->add_option("--output", c.output, "equirect image (.png .ppm .pgm .yuv)")->required();
    unproject->add_option("--width", c.width, "output width (default 2 x height)");
    unproject->add_option("--height", c.height, "output height (default from the manifest density)");
    unproject->add_flag("--blend", c.blend, "blend across overlap bands");

    auto* metrics = app.add_subcommand("metrics", "sphere quality metrics");
    metrics->require_subcommand(1);
    std::vector<CLI::App*> sphere_cmds;
    for (const char* name : {"spsnr", "lpsnr"}) {
        auto* m = metrics->add_subcommand(name, name == std::string("spsnr") ? "sphere PSNR" : "latitude-weighted sphere PSNR");
        m->add_option("--ref", c.ref)->required();
        m->add_option("--test", c.test)->required();
        m->add_option("--size", c.size, "WIDTHxHEIGHT of raw YUV inputs");
        m->add_option("--samples", c.samples, "sphere sample points")->capture_default_str();
        m->add_flag("--chroma", c.chroma, "combine planes as (6Y+Cb+Cr)/8");
        m->add_flag("--json", c.json);
        sphere_cmds.push_back(m);
    }
    sphere_cmds[1]->add_option("--weights", c.weights, "latitude weight table (default cos latitude)");
    auto* bd = metrics->add_subcommand("bdrate", "Bjontegaard delta rate");
    bd->add_option("--anchor", c.anchor, "anchor RD CSV")->required();
    bd->add_option("--test", c.test, "test RD CSV")->required();
    bd->add_flag("--json", c.json);

    try {
        std::ranges::reverse(args);
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*optimize) {
            return cmd_optimize(c, out, err);
        }
        if (*best) {
            return cmd_best(c, out);
        }
        if (*curve) {
            return cmd_area_curve(c, out);
        }
        if (*compare) {
            return cmd_compare_area(c, out);
        }
        if (*project) {
            return cmd_project(c, out);
        }
        if (*unproject) {
            return cmd_unproject(c, out);
        }
        if (*sphere_cmds[0]) {
            return cmd_sphere_metric(c, out, false);
        }
        if (*sphere_cmds[1]) {
            return cmd_sphere_metric(c, out, true);
        }
        return cmd_bdrate(c, out);
    } catch (const std::invalid_argument& e) {
        // usage errors, invalid schemes and infeasible optimizations
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

} // namespace omnitile::cli
