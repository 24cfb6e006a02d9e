#include "dipole/types.hpp"

#include <algorithm>
#include <charconv>

namespace dipole {

namespace {

void require_nonempty(std::size_t width, std::size_t height, const char* what) {
    if (width == 0 || height == 0) {
        throw DimensionError(std::string(what) + ": width and height must be at least 1");
    }
}

void require_length(std::size_t got, std::size_t width, std::size_t height, const char* what) {
    if (got != width * height) {
        throw DimensionError(std::string(what) + ": expected " + std::to_string(width * height) + " values, got " +
                             std::to_string(got));
    }
}

void require_finite(std::span<const double> values, const char* what) {
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument(std::string(what) + ": non-finite value");
        }
    }
}

}  // namespace

GrayImage::GrayImage(std::size_t width, std::size_t height, std::uint8_t fill)
    : width_(width), height_(height), pixels_(width * height, fill) {
    require_nonempty(width, height, "GrayImage");
}

GrayImage::GrayImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
    require_nonempty(width, height, "GrayImage");
    require_length(pixels_.size(), width, height, "GrayImage");
}

ScalarField::ScalarField(std::size_t width, std::size_t height, double fill)
    : width_(width), height_(height), values_(width * height, fill) {
    require_nonempty(width, height, "ScalarField");
    require_finite(values_, "ScalarField");
}

ScalarField::ScalarField(std::size_t width, std::size_t height, std::vector<double> values)
    : width_(width), height_(height), values_(std::move(values)) {
    require_nonempty(width, height, "ScalarField");
    require_length(values_.size(), width, height, "ScalarField");
    require_finite(values_, "ScalarField");
}

double ScalarField::max() const {
    if (values_.empty()) {
        return 0.0;
    }
    return *std::max_element(values_.begin(), values_.end());
}

VectorField::VectorField(std::size_t width, std::size_t height)
    : width_(width), height_(height), xs_(width * height, 0.0), ys_(width * height, 0.0) {
    require_nonempty(width, height, "VectorField");
}

VectorField::VectorField(std::size_t width, std::size_t height, std::vector<double> xs, std::vector<double> ys)
    : width_(width), height_(height), xs_(std::move(xs)), ys_(std::move(ys)) {
    require_nonempty(width, height, "VectorField");
    require_length(xs_.size(), width, height, "VectorField");
    require_length(ys_.size(), width, height, "VectorField");
    require_finite(xs_, "VectorField");
    require_finite(ys_, "VectorField");
}

Window Window::radius(std::size_t delta_i, std::size_t delta_j) {
    if (delta_i < 1 || delta_j < 1) {
        throw std::invalid_argument("Window: radius half-extents must be at least 1");
    }
    return Window(Kind::Radius, delta_i, delta_j);
}

Window Window::parse(const std::string& text) {
    if (text == "2x2") {
        return block2x2();
    }
    auto bad = [&]() { return std::invalid_argument("invalid window '" + text + "' (expected 2x2 or r<di>x<dj>)"); };
    if (text.size() < 4 || text.front() != 'r') {
        throw bad();
    }
    const auto sep = text.find('x', 1);
    if (sep == std::string::npos) {
        throw bad();
    }
    auto parse_count = [&](std::size_t begin, std::size_t end) {
        std::size_t value = 0;
        const char* first = text.data() + begin;
        const char* last = text.data() + end;
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc() || ptr != last || first == last) {
            throw bad();
        }
        return value;
    };
    const std::size_t di = parse_count(1, sep);
    const std::size_t dj = parse_count(sep + 1, text.size());
    if (di < 1 || dj < 1) {
        throw bad();
    }
    return radius(di, dj);
}

std::string Window::to_string() const {
    if (kind_ == Kind::Block2x2) {
        return "2x2";
    }
    return "r" + std::to_string(delta_i_) + "x" + std::to_string(delta_j_);
}

}  // namespace dipole
