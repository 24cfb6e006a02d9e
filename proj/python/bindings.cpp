#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "dipole/analysis.hpp"
#include "dipole/cli.hpp"
#include "dipole/core.hpp"
#include "dipole/imgio.hpp"
#include "dipole/render.hpp"
#include "dipole/segment.hpp"

namespace py = pybind11;

namespace {

using ByteArray = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;
using RealArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

dipole::GrayImage to_image(const ByteArray& arr) {
    if (arr.ndim() != 2) {
        throw py::value_error("expected a 2-D uint8 array (rows, columns)");
    }
    const auto h = static_cast<std::size_t>(arr.shape(0));
    const auto w = static_cast<std::size_t>(arr.shape(1));
    return dipole::GrayImage(w, h, std::vector<std::uint8_t>(arr.data(), arr.data() + arr.size()));
}

template <typename T>
py::array_t<T> to_array(std::size_t width, std::size_t height, std::span<const T> values) {
    py::array_t<T> out({height, width});
    std::copy(values.begin(), values.end(), out.mutable_data());
    return out;
}

py::array_t<double> to_array(const dipole::ScalarField& f) { return to_array(f.width(), f.height(), f.values()); }

py::array_t<std::uint8_t> to_array(const dipole::GrayImage& img) { return to_array(img.width(), img.height(), img.pixels()); }

py::tuple to_arrays(const dipole::VectorField& f) {
    return py::make_tuple(to_array(f.width(), f.height(), f.xs()), to_array(f.width(), f.height(), f.ys()));
}

dipole::VectorField to_field(const RealArray& xs, const RealArray& ys) {
    if (xs.ndim() != 2 || ys.ndim() != 2 || xs.shape(0) != ys.shape(0) || xs.shape(1) != ys.shape(1)) {
        throw py::value_error("expected two 2-D arrays of the same shape");
    }
    return dipole::VectorField(static_cast<std::size_t>(xs.shape(1)), static_cast<std::size_t>(xs.shape(0)),
                               std::vector<double>(xs.data(), xs.data() + xs.size()),
                               std::vector<double>(ys.data(), ys.data() + ys.size()));
}

dipole::ScalarField to_scalar(const RealArray& values) {
    if (values.ndim() != 2) {
        throw py::value_error("expected a 2-D float array");
    }
    return dipole::ScalarField(static_cast<std::size_t>(values.shape(1)), static_cast<std::size_t>(values.shape(0)),
                               std::vector<double>(values.data(), values.data() + values.size()));
}

py::tuple dipole_field(const ByteArray& img, const std::string& window, bool fast, unsigned threads) {
    const auto image = to_image(img);
    const auto win = dipole::Window::parse(window);
    py::gil_scoped_release release;
    auto field = fast ? dipole::dipole_field_fast(image, win, {threads}) : dipole::dipole_field(image, win, {threads});
    py::gil_scoped_acquire acquire;
    return to_arrays(field);
}

py::list extract_domains(const ByteArray& img, const std::string& window, std::optional<double> tau,
                         int connectivity, std::size_t min_pixels) {
    dipole::SegmentOptions opts;
    opts.window = dipole::Window::parse(window);
    opts.tau = tau;
    if (connectivity != 4 && connectivity != 8) {
        throw py::value_error("connectivity must be 4 or 8");
    }
    opts.connectivity = connectivity == 4 ? dipole::Connectivity::Four : dipole::Connectivity::Eight;
    opts.min_pixels = min_pixels;
    py::list out;
    for (const auto& d : dipole::extract_domains(to_image(img), opts)) {
        py::dict item;
        item["label"] = d.label;
        item["bbox"] = py::make_tuple(d.bbox.min_x, d.bbox.min_y, d.bbox.max_x, d.bbox.max_y);
        item["pixel_count"] = d.pixel_count;
        py::array_t<bool> mask({d.mask.height(), d.mask.width()});
        auto m = mask.mutable_unchecked<2>();
        for (std::size_t r = 0; r < d.mask.height(); ++r) {
            for (std::size_t c = 0; c < d.mask.width(); ++c) {
                m(r, c) = d.mask(r, c);
            }
        }
        item["mask"] = mask;
        item["dipoles"] = to_arrays(d.dipoles);
        item["perpendiculars"] = to_arrays(d.perpendiculars);
        out.append(item);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Local dipole-moment vector fields over grayscale images";

    py::register_exception<dipole::DimensionError>(m, "DimensionError", PyExc_ValueError);
    py::register_exception<dipole::ParseError>(m, "ParseError", PyExc_ValueError);

    m.def("local_mean", [](const ByteArray& img, const std::string& window) {
        return to_array(dipole::local_mean(to_image(img), dipole::Window::parse(window)));
    }, py::arg("image"), py::arg("window") = "2x2");

    m.def("charge_map", [](const ByteArray& img, const std::string& window) {
        return to_array(dipole::charge_map(to_image(img), dipole::Window::parse(window)));
    }, py::arg("image"), py::arg("window") = "2x2");

    m.def("dipole_field", &dipole_field, py::arg("image"), py::arg("window") = "2x2", py::arg("fast") = true,
          py::arg("threads") = 0,
          "Returns (px, py) arrays shaped like the image. fast=False uses direct window sums.");

    m.def("magnitude", [](const RealArray& xs, const RealArray& ys) {
        return to_array(dipole::magnitude_field(to_field(xs, ys)));
    }, py::arg("px"), py::arg("py"));

    m.def("whole_image_dipole", [](const ByteArray& img) {
        const auto d = dipole::whole_image_dipole(to_image(img));
        return py::make_tuple(d.px, d.py);
    }, py::arg("image"));

    m.def("gradient_field", [](const ByteArray& img) { return to_arrays(dipole::gradient_field(to_image(img))); },
          py::arg("image"));

    m.def("perpendicular_field", [](const RealArray& xs, const RealArray& ys) {
        return to_arrays(dipole::perpendicular_field(to_field(xs, ys)));
    }, py::arg("px"), py::arg("py"));

    m.def("angular_agreement", [](const RealArray& ax, const RealArray& ay, const RealArray& bx, const RealArray& by,
                                  double min_magnitude) {
        const auto s = dipole::angular_agreement(to_field(ax, ay), to_field(bx, by), min_magnitude);
        py::dict out;
        out["median_angle_deg"] = s.median_angle_deg;
        out["mean_angle_deg"] = s.mean_angle_deg;
        out["sample_count"] = s.sample_count;
        return out;
    }, py::arg("ax"), py::arg("ay"), py::arg("bx"), py::arg("by"), py::arg("min_magnitude") = 0.0);

    m.def("tone_map", [](const RealArray& magnitude, double alpha) {
        return to_array(dipole::tone_map(to_scalar(magnitude), alpha).image);
    }, py::arg("magnitude"), py::arg("alpha") = dipole::kDefaultAlpha);

    m.def("cell_dipoles", [](const ByteArray& img, std::size_t cell_size) {
        py::list out;
        for (const auto& c : dipole::cell_dipoles(to_image(img), cell_size)) {
            out.append(py::make_tuple(c.center_row, c.center_col, c.dipole.px, c.dipole.py));
        }
        return out;
    }, py::arg("image"), py::arg("cell_size") = 20, "List of (center_row, center_col, px, py).");

    m.def("render_overlay", [](const ByteArray& img, std::size_t cell_size, std::optional<double> tau) {
        const auto image = to_image(img);
        dipole::OverlayConfig cfg;
        cfg.cell_size = cell_size;
        cfg.magnitude_threshold = tau;
        const auto rgb = dipole::render_overlay(image, dipole::cell_dipoles(image, cell_size), cfg);
        py::array_t<std::uint8_t> out({rgb.height(), rgb.width(), std::size_t{3}});
        std::copy(rgb.bytes().begin(), rgb.bytes().end(), out.mutable_data());
        return out;
    }, py::arg("image"), py::arg("cell_size") = 20, py::arg("tau") = py::none());

    m.def("extract_domains", &extract_domains, py::arg("image"), py::arg("window") = "2x2",
          py::arg("tau") = py::none(), py::arg("connectivity") = 8, py::arg("min_pixels") = 4);

    m.def("read_pgm", [](const py::bytes& data) {
        const std::string raw = data;
        return to_array(dipole::read_pgm(std::span(reinterpret_cast<const std::uint8_t*>(raw.data()), raw.size())));
    }, py::arg("data"));

    m.def("write_pgm", [](const ByteArray& img) {
        const auto bytes = dipole::write_pgm(to_image(img));
        return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
    }, py::arg("image"));

    m.def("run_cli", [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        const int code = dipole::cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
    }, py::arg("args"), "Runs the command-line front end in-process; returns (exit_code, stdout, stderr).");
}
