#include "dipole/imgio.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace dipole {

namespace {

// Cursor over a Netpbm header: whitespace and '#' comments between tokens.
class NetpbmReader {
public:
    explicit NetpbmReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::string magic() {
        if (bytes_.size() < 2) {
            throw ParseError("truncated header: missing magic number", pos_);
        }
        std::string m{static_cast<char>(bytes_[0]), static_cast<char>(bytes_[1])};
        pos_ = 2;
        return m;
    }

    std::size_t number(const char* what) {
        skip_separators();
        const std::size_t start = pos_;
        std::size_t value = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            value = value * 10 + static_cast<std::size_t>(bytes_[pos_] - '0');
            if (value > 1'000'000'000) {
                throw ParseError(std::string(what) + " is too large", start);
            }
            ++pos_;
        }
        if (pos_ == start) {
            if (pos_ >= bytes_.size()) {
                throw ParseError(std::string("truncated input: expected ") + what, pos_);
            }
            throw ParseError(std::string("expected ") + what, pos_);
        }
        return value;
    }

    // The single whitespace byte that ends a binary header.
    void raster_separator() {
        if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
            throw ParseError("expected whitespace before raster data", pos_);
        }
        ++pos_;
    }

    std::span<const std::uint8_t> raw(std::size_t count) {
        if (bytes_.size() - pos_ < count) {
            throw ParseError("truncated raster: expected " + std::to_string(count) + " bytes, found " +
                                 std::to_string(bytes_.size() - pos_),
                             bytes_.size());
        }
        auto out = bytes_.subspan(pos_, count);
        pos_ += count;
        return out;
    }

    std::size_t offset() const noexcept { return pos_; }

    // Advances to the next token and returns its offset.
    std::size_t next_token() {
        skip_separators();
        return pos_;
    }

private:
    void skip_separators() {
        while (pos_ < bytes_.size()) {
            if (std::isspace(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') {
                    ++pos_;
                }
            } else {
                break;
            }
        }
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

struct Header {
    std::size_t width;
    std::size_t height;
    std::size_t maxval;
};

Header read_header(NetpbmReader& in) {
    Header h{};
    std::size_t at = in.next_token();
    h.width = in.number("width");
    if (h.width == 0) {
        throw ParseError("zero width", at);
    }
    at = in.next_token();
    h.height = in.number("height");
    if (h.height == 0) {
        throw ParseError("zero height", at);
    }
    at = in.next_token();
    h.maxval = in.number("maxval");
    if (h.maxval == 0 || h.maxval > 255) {
        throw ParseError("unsupported maxval " + std::to_string(h.maxval) + " (must be 1..255)", at);
    }
    return h;
}

Bytes encode(const char* magic, std::size_t width, std::size_t height, std::span<const std::uint8_t> payload) {
    const std::string header = std::string(magic) + "\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
    Bytes out(header.begin(), header.end());
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
}

}  // namespace

GrayImage read_pgm(std::span<const std::uint8_t> bytes) {
    NetpbmReader in(bytes);
    const std::string magic = in.magic();
    if (magic != "P5" && magic != "P2") {
        throw ParseError("unsupported format '" + magic + "' (expected P5 or P2 graymap)", 0);
    }
    const Header h = read_header(in);
    std::vector<std::uint8_t> pixels(h.width * h.height);
    if (magic == "P5") {
        in.raster_separator();
        const auto raw = in.raw(pixels.size());
        std::copy(raw.begin(), raw.end(), pixels.begin());
    } else {
        for (auto& p : pixels) {
            const std::size_t at = in.next_token();
            const std::size_t v = in.number("pixel value");
            if (v > h.maxval) {
                throw ParseError("pixel value " + std::to_string(v) + " exceeds maxval", at);
            }
            p = static_cast<std::uint8_t>(v);
        }
    }
    for (std::uint8_t p : pixels) {
        if (p > h.maxval) {
            throw ParseError("pixel value exceeds maxval", in.offset());
        }
    }
    return GrayImage(h.width, h.height, std::move(pixels));
}

RgbImage read_ppm(std::span<const std::uint8_t> bytes) {
    NetpbmReader in(bytes);
    const std::string magic = in.magic();
    if (magic != "P6") {
        throw ParseError("unsupported format '" + magic + "' (expected P6 pixmap)", 0);
    }
    const Header h = read_header(in);
    in.raster_separator();
    const auto raw = in.raw(3 * h.width * h.height);
    return RgbImage(h.width, h.height, std::vector<std::uint8_t>(raw.begin(), raw.end()));
}

Bytes write_pgm(const GrayImage& img) { return encode("P5", img.width(), img.height(), img.pixels()); }

Bytes write_ppm(const RgbImage& img) { return encode("P6", img.width(), img.height(), img.bytes()); }

Bytes read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open '" + path.string() + "' for reading");
    }
    return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw std::runtime_error("failed writing '" + path.string() + "'");
    }
}

void write_file(const std::filesystem::path& path, std::string_view text) {
    write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

FieldFormat parse_field_format(std::string_view text) {
    if (text == "json") {
        return FieldFormat::Json;
    }
    if (text == "csv") {
        return FieldFormat::Csv;
    }
    throw std::invalid_argument("unknown export format '" + std::string(text) + "' (expected json or csv)");
}

std::string format_number(double value) {
    char buf[32];
    const int n = std::snprintf(buf, sizeof buf, "%.17g", value);
    return std::string(buf, static_cast<std::size_t>(n));
}

std::string export_field(const AnyField& field, FieldFormat format, const ExportMetadata& meta) {
    if (format == FieldFormat::Json) {
        nlohmann::ordered_json doc;
        std::visit(
            [&](const auto& f) {
                using T = std::decay_t<decltype(f)>;
                doc["kind"] = std::is_same_v<T, VectorField> ? "vector" : "scalar";
                doc["width"] = f.width();
                doc["height"] = f.height();
                if constexpr (std::is_same_v<T, VectorField>) {
                    doc["px"] = std::vector<double>(f.xs().begin(), f.xs().end());
                    doc["py"] = std::vector<double>(f.ys().begin(), f.ys().end());
                } else {
                    doc["values"] = std::vector<double>(f.values().begin(), f.values().end());
                }
            },
            field);
        doc["meta"] = meta.is_null() ? ExportMetadata::object() : meta;
        return doc.dump() + "\n";
    }

    std::string out;
    std::visit(
        [&](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            out = std::is_same_v<T, VectorField> ? "i,j,px,py\n" : "i,j,value\n";
            for (std::size_t r = 0; r < f.height(); ++r) {
                for (std::size_t c = 0; c < f.width(); ++c) {
                    out += std::to_string(r) + "," + std::to_string(c) + ",";
                    if constexpr (std::is_same_v<T, VectorField>) {
                        out += format_number(f.x(r, c)) + "," + format_number(f.y(r, c));
                    } else {
                        out += format_number(f(r, c));
                    }
                    out += "\n";
                }
            }
        },
        field);
    return out;
}

namespace {

AnyField import_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(), e.byte);
    }
    try {
        const auto width = doc.at("width").get<std::size_t>();
        const auto height = doc.at("height").get<std::size_t>();
        const auto kind = doc.at("kind").get<std::string>();
        if (kind == "vector") {
            return VectorField(width, height, doc.at("px").get<std::vector<double>>(),
                               doc.at("py").get<std::vector<double>>());
        }
        if (kind == "scalar") {
            return ScalarField(width, height, doc.at("values").get<std::vector<double>>());
        }
        throw ParseError("unknown field kind '" + kind + "'", 0);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed field document: ") + e.what(), 0);
    }
}

double parse_double(std::string_view token, std::size_t offset) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
        throw ParseError("invalid number '" + std::string(token) + "'", offset);
    }
    return value;
}

AnyField import_csv(std::string_view text) {
    std::vector<std::vector<double>> rows;
    std::size_t pos = text.find('\n');
    if (pos == std::string_view::npos) {
        throw ParseError("missing CSV header", 0);
    }
    const std::string_view header = text.substr(0, pos);
    const bool vector = header == "i,j,px,py";
    if (!vector && header != "i,j,value") {
        throw ParseError("unknown CSV header '" + std::string(header) + "'", 0);
    }
    const std::size_t columns = vector ? 4 : 3;
    ++pos;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(pos, end - pos);
        if (!line.empty()) {
            std::vector<double> cells;
            std::size_t start = 0;
            while (true) {
                const std::size_t comma = line.find(',', start);
                const auto token = line.substr(start, comma == std::string_view::npos ? line.size() - start : comma - start);
                cells.push_back(parse_double(token, pos + start));
                if (comma == std::string_view::npos) {
                    break;
                }
                start = comma + 1;
            }
            if (cells.size() != columns) {
                throw ParseError("expected " + std::to_string(columns) + " columns", pos);
            }
            rows.push_back(std::move(cells));
        }
        pos = end + 1;
    }
    if (rows.empty()) {
        throw ParseError("CSV has no data rows", text.size());
    }
    const auto height = static_cast<std::size_t>(rows.back()[0]) + 1;
    const auto width = static_cast<std::size_t>(rows.back()[1]) + 1;
    if (rows.size() != width * height) {
        throw ParseError("CSV rows do not form a full raster", text.size());
    }
    for (std::size_t k = 0; k < rows.size(); ++k) {
        if (rows[k][0] != static_cast<double>(k / width) || rows[k][1] != static_cast<double>(k % width)) {
            throw ParseError("CSV rows out of raster order at row " + std::to_string(k), 0);
        }
    }
    if (vector) {
        std::vector<double> xs, ys;
        for (const auto& r : rows) {
            xs.push_back(r[2]);
            ys.push_back(r[3]);
        }
        return VectorField(width, height, std::move(xs), std::move(ys));
    }
    std::vector<double> values;
    for (const auto& r : rows) {
        values.push_back(r[2]);
    }
    return ScalarField(width, height, std::move(values));
}

}  // namespace

AnyField import_field(std::string_view text, FieldFormat format) {
    return format == FieldFormat::Json ? import_json(text) : import_csv(text);
}

}  // namespace dipole
