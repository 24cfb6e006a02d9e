#include "dipole/segment.hpp"

#include <algorithm>
#include <numeric>

#include "dipole/analysis.hpp"
#include "dipole/render.hpp"

namespace dipole {

BinaryMask::BinaryMask(std::size_t width, std::size_t height, bool fill)
    : width_(width), height_(height), bits_(width * height, fill ? 1 : 0) {}

std::size_t BinaryMask::count() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

BinaryMask threshold_mask(const ScalarField& magnitude, double tau) {
    if (!(tau >= 0.0)) {
        throw std::invalid_argument("threshold must be >= 0");
    }
    BinaryMask mask(magnitude.width(), magnitude.height());
    for (std::size_t r = 0; r < magnitude.height(); ++r) {
        for (std::size_t c = 0; c < magnitude.width(); ++c) {
            mask.set(r, c, magnitude(r, c) >= tau);
        }
    }
    return mask;
}

double auto_threshold(const ScalarField& magnitude) { return kAutoThresholdFraction * magnitude.max(); }

namespace {

class DisjointSets {
public:
    std::uint32_t make() {
        parent_.push_back(static_cast<std::uint32_t>(parent_.size()));
        return parent_.back();
    }

    std::uint32_t find(std::uint32_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    // Keeps the smaller root so every set is represented by its earliest
    // provisional label.
    void unite(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a < b) {
            parent_[b] = a;
        } else if (b < a) {
            parent_[a] = b;
        }
    }

private:
    std::vector<std::uint32_t> parent_;
};

}  // namespace

// Classic two-pass labeling. Provisional labels are issued in raster order
// and each set keeps its smallest one, so renumbering roots in increasing
// order yields labels in order of first encounter.
LabelImage connected_components(const BinaryMask& mask, Connectivity connectivity) {
    constexpr std::uint32_t kNone = 0xFFFFFFFFu;
    const std::size_t w = mask.width();
    const std::size_t h = mask.height();
    std::vector<std::uint32_t> provisional(w * h, kNone);
    DisjointSets sets;

    for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t c = 0; c < w; ++c) {
            if (!mask(r, c)) {
                continue;
            }
            std::uint32_t label = kNone;
            auto visit = [&](std::size_t nr, std::size_t nc) {
                const std::uint32_t other = provisional[nr * w + nc];
                if (other == kNone) {
                    return;
                }
                if (label == kNone) {
                    label = other;
                } else {
                    sets.unite(label, other);
                }
            };
            if (c > 0) visit(r, c - 1);
            if (r > 0) {
                visit(r - 1, c);
                if (connectivity == Connectivity::Eight) {
                    if (c > 0) visit(r - 1, c - 1);
                    if (c + 1 < w) visit(r - 1, c + 1);
                }
            }
            provisional[r * w + c] = label == kNone ? sets.make() : label;
        }
    }

    LabelImage out{w, h, std::vector<std::uint32_t>(w * h, 0), 0};
    std::vector<std::uint32_t> final_label;
    for (std::size_t k = 0; k < w * h; ++k) {
        if (provisional[k] == kNone) {
            continue;
        }
        const std::uint32_t root = sets.find(provisional[k]);
        if (root >= final_label.size()) {
            final_label.resize(root + 1, 0);
        }
        if (final_label[root] == 0) {
            final_label[root] = static_cast<std::uint32_t>(++out.count);
        }
        out.labels[k] = final_label[root];
    }
    return out;
}

std::vector<SignDomain> extract_domains(const GrayImage& img, const SegmentOptions& options) {
    if (options.min_pixels < 1) {
        throw std::invalid_argument("min_pixels must be at least 1");
    }
    const VectorField dipoles = dipole_field_fast(img, options.window);
    const ScalarField magnitude = magnitude_field(dipoles);
    const double tau = options.tau.value_or(auto_threshold(magnitude));
    const LabelImage labels = connected_components(threshold_mask(magnitude, tau), options.connectivity);

    struct Extent {
        BoundingBox box{~std::size_t{0}, ~std::size_t{0}, 0, 0};
        std::size_t pixels = 0;
    };
    std::vector<Extent> extents(labels.count + 1);
    for (std::size_t r = 0; r < labels.height; ++r) {
        for (std::size_t c = 0; c < labels.width; ++c) {
            const std::uint32_t label = labels(r, c);
            if (label == 0) {
                continue;
            }
            Extent& e = extents[label];
            e.box.min_x = std::min(e.box.min_x, c);
            e.box.min_y = std::min(e.box.min_y, r);
            e.box.max_x = std::max(e.box.max_x, c);
            e.box.max_y = std::max(e.box.max_y, r);
            ++e.pixels;
        }
    }

    std::vector<SignDomain> domains;
    for (std::uint32_t label = 1; label <= labels.count; ++label) {
        const Extent& e = extents[label];
        if (e.pixels < options.min_pixels) {
            continue;
        }
        SignDomain domain;
        domain.label = label;
        domain.bbox = e.box;
        domain.pixel_count = e.pixels;
        domain.mask = BinaryMask(e.box.width(), e.box.height());
        VectorField cropped(e.box.width(), e.box.height());
        for (std::size_t r = e.box.min_y; r <= e.box.max_y; ++r) {
            for (std::size_t c = e.box.min_x; c <= e.box.max_x; ++c) {
                if (labels(r, c) != label) {
                    continue;
                }
                domain.mask.set(r - e.box.min_y, c - e.box.min_x, true);
                cropped.set(r - e.box.min_y, c - e.box.min_x, dipoles.x(r, c), dipoles.y(r, c));
            }
        }
        domain.perpendiculars = perpendicular_field(cropped);
        domain.dipoles = std::move(cropped);
        domains.push_back(std::move(domain));
    }
    return domains;
}

}  // namespace dipole
