#include "dipole/cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <optional>

#include "dipole/analysis.hpp"
#include "dipole/core.hpp"
#include "dipole/imgio.hpp"
#include "dipole/render.hpp"
#include "dipole/segment.hpp"

namespace dipole::cli {

namespace {

// Input is well-formed but unreadable or undecodable.
struct IoFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Threshold {
    std::optional<double> value;  // empty = auto

    std::string describe() const { return value ? format_number(*value) : "auto"; }
};

Threshold parse_threshold(const std::string& text) {
    if (text == "auto") {
        return {};
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || !(value >= 0.0) || !std::isfinite(value)) {
        throw CLI::ValidationError("--tau", "expected 'auto' or a non-negative number, got '" + text + "'");
    }
    return {value};
}

const auto kWindowCheck = CLI::Validator(
    [](std::string& text) -> std::string {
        try {
            Window::parse(text);
            return {};
        } catch (const std::exception& e) {
            return e.what();
        }
    },
    "2x2|r<di>x<dj>");

const auto kThresholdCheck = CLI::Validator(
    [](std::string& text) -> std::string {
        try {
            parse_threshold(text);
            return {};
        } catch (const CLI::ValidationError& e) {
            return e.what();
        }
    },
    "auto|TAU");

struct Options {
    std::string input;
    std::string output;
    std::string window = "2x2";
    double alpha = kDefaultAlpha;
    std::string tau = "auto";
    std::size_t cell_size = 20;
    int connectivity = 8;
    std::size_t min_pixels = 4;
    std::string format = "json";
    bool fields = false;
};

GrayImage load(const std::string& path) {
    Bytes bytes;
    try {
        bytes = read_file(path);
    } catch (const std::exception& e) {
        throw IoFailure(e.what());
    }
    try {
        return read_pgm(bytes);
    } catch (const ParseError& e) {
        throw IoFailure(path + ": " + e.what());
    }
}

void store(const std::string& path, const auto& payload) {
    try {
        write_file(path, payload);
    } catch (const std::exception& e) {
        throw IoFailure(e.what());
    }
}

ExportMetadata base_meta(const std::string& subcommand, const GrayImage& img) {
    ExportMetadata meta = ExportMetadata::object();
    meta["subcommand"] = subcommand;
    meta["image_width"] = img.width();
    meta["image_height"] = img.height();
    return meta;
}

nlohmann::ordered_json field_json(const VectorField& f) {
    nlohmann::ordered_json j;
    j["width"] = f.width();
    j["height"] = f.height();
    j["px"] = std::vector<double>(f.xs().begin(), f.xs().end());
    j["py"] = std::vector<double>(f.ys().begin(), f.ys().end());
    return j;
}

int cmd_magnitude(const Options& o, std::ostream& err) {
    const GrayImage img = load(o.input);
    const Window win = Window::parse(o.window);
    const auto mapped = tone_map(magnitude_field(dipole_field_fast(img, win)), o.alpha);
    if (mapped.flat) {
        err << "note: dipole field is zero everywhere; writing an all-zero map\n";
    }
    store(o.output, write_pgm(mapped.image));
    return kExitOk;
}

int cmd_field(const Options& o, const std::string& name, std::ostream&) {
    const GrayImage img = load(o.input);
    const FieldFormat format = parse_field_format(o.format);
    ExportMetadata meta = base_meta(name, img);
    AnyField field;
    if (name == "gradient") {
        field = gradient_field(img);
    } else {
        const Window win = Window::parse(o.window);
        meta["window"] = win.to_string();
        VectorField dipoles = dipole_field_fast(img, win);
        field = name == "perp" ? perpendicular_field(dipoles) : std::move(dipoles);
    }
    store(o.output, export_field(field, format, meta));
    return kExitOk;
}

int cmd_overlay(const Options& o, std::ostream&) {
    const GrayImage img = load(o.input);
    const auto cells = cell_dipoles(img, o.cell_size);
    OverlayConfig cfg;
    cfg.cell_size = o.cell_size;
    cfg.magnitude_threshold = parse_threshold(o.tau).value;
    store(o.output, write_ppm(render_overlay(img, cells, cfg)));
    return kExitOk;
}

int cmd_segment(const Options& o, std::ostream&) {
    const GrayImage img = load(o.input);
    SegmentOptions opts;
    opts.window = Window::parse(o.window);
    opts.connectivity = o.connectivity == 4 ? Connectivity::Four : Connectivity::Eight;
    opts.min_pixels = o.min_pixels;
    const Threshold tau = parse_threshold(o.tau);
    const double resolved =
        tau.value.value_or(auto_threshold(magnitude_field(dipole_field_fast(img, opts.window))));
    opts.tau = resolved;
    const auto domains = extract_domains(img, opts);

    nlohmann::ordered_json doc;
    doc["domain_count"] = domains.size();
    doc["domains"] = nlohmann::ordered_json::array();
    for (const auto& d : domains) {
        nlohmann::ordered_json j;
        j["label"] = d.label;
        j["bbox"] = {{"min_x", d.bbox.min_x}, {"min_y", d.bbox.min_y}, {"max_x", d.bbox.max_x}, {"max_y", d.bbox.max_y}};
        j["pixel_count"] = d.pixel_count;
        if (o.fields) {
            j["dipoles"] = field_json(d.dipoles);
            j["perpendiculars"] = field_json(d.perpendiculars);
        }
        doc["domains"].push_back(std::move(j));
    }
    ExportMetadata meta = base_meta("segment", img);
    meta["window"] = opts.window.to_string();
    meta["tau"] = tau.describe();
    meta["tau_value"] = resolved;
    meta["connectivity"] = o.connectivity;
    meta["min_pixels"] = o.min_pixels;
    doc["meta"] = meta;
    store(o.output, doc.dump() + "\n");
    return kExitOk;
}

int cmd_compare(const Options& o, std::ostream& out) {
    const GrayImage img = load(o.input);
    const Window win = Window::parse(o.window);
    const Threshold tau = parse_threshold(o.tau);
    const VectorField dipoles = dipole_field_fast(img, win);
    const VectorField gradient = gradient_field(img);
    const AngularStats stats = tau.value ? angular_agreement(dipoles, gradient, *tau.value)
                                         : angular_agreement_relative(dipoles, gradient, kAutoThresholdFraction);
    nlohmann::ordered_json doc;
    doc["median_angle_deg"] = stats.median_angle_deg;
    doc["mean_angle_deg"] = stats.mean_angle_deg;
    doc["sample_count"] = stats.sample_count;
    ExportMetadata meta = base_meta("compare", img);
    meta["window"] = win.to_string();
    meta["tau"] = tau.describe();
    doc["meta"] = meta;
    out << doc.dump() << "\n";
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Local dipole-moment fields for grayscale images", "dipolefield"};
    app.require_subcommand(1);
    Options o;

    auto add_io = [&](CLI::App* sub, bool with_output) {
        sub->add_option("input", o.input, "Input PGM (P2 or P5)")->required();
        if (with_output) {
            sub->add_option("output", o.output, "Output file")->required();
        }
    };
    auto add_window = [&](CLI::App* sub) {
        sub->add_option("--window", o.window, "Neighborhood: 2x2 or r<di>x<dj>")->check(kWindowCheck)->capture_default_str();
    };
    auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", o.format, "Export format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    };
    auto add_tau = [&](CLI::App* sub, const char* help) {
        sub->add_option("--tau", o.tau, help)->check(kThresholdCheck)->capture_default_str();
    };

    auto* magnitude = app.add_subcommand("magnitude", "Tone-mapped dipole magnitude map (PGM)");
    add_io(magnitude, true);
    add_window(magnitude);
    magnitude->add_option("--alpha", o.alpha, "Tone-map exponent")->check(CLI::PositiveNumber)->capture_default_str();

    auto* field = app.add_subcommand("field", "Export the dipole vector field");
    add_io(field, true);
    add_window(field);
    add_format(field);

    auto* overlay = app.add_subcommand("overlay", "Per-cell dipole direction lines over the image (PPM)");
    add_io(overlay, true);
    overlay->add_option("--cell-size", o.cell_size, "Cell edge in pixels")->check(CLI::Range(2, 1 << 20))->capture_default_str();
    add_tau(overlay, "Cell dipole magnitude below which no line is drawn");

    auto* segment = app.add_subcommand("segment", "Threshold the dipole magnitude into connected domains (JSON)");
    add_io(segment, true);
    add_tau(segment, "Magnitude threshold");
    segment->add_option("--connectivity", o.connectivity, "4 or 8")->check(CLI::IsMember({4, 8}))->capture_default_str();
    segment->add_option("--min-pixels", o.min_pixels, "Drop smaller domains")->check(CLI::Range(1, 1 << 30))->capture_default_str();
    add_window(segment);
    segment->add_flag("--fields", o.fields, "Include per-domain dipole and perpendicular fields");

    auto* perp = app.add_subcommand("perp", "Export the perpendicular (quarter-turned dipole) field");
    add_io(perp, true);
    add_window(perp);
    add_format(perp);

    auto* gradient = app.add_subcommand("gradient", "Export the brightness gradient field");
    add_io(gradient, true);
    add_format(gradient);

    auto* compare = app.add_subcommand("compare", "Angular agreement between dipole and gradient fields (JSON on stdout)");
    add_io(compare, false);
    add_window(compare);
    add_tau(compare, "Magnitude gate; auto gates each field at 5% of its maximum");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (*magnitude) return cmd_magnitude(o, err);
        if (*field) return cmd_field(o, "field", err);
        if (*perp) return cmd_field(o, "perp", err);
        if (*gradient) return cmd_field(o, "gradient", err);
        if (*overlay) return cmd_overlay(o, err);
        if (*segment) return cmd_segment(o, err);
        if (*compare) return cmd_compare(o, out);
    } catch (const IoFailure& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const DimensionError& e) {
        err << "error: " << o.input << ": " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace dipole::cli
