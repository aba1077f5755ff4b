#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

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

namespace py = pybind11;
using namespace lutforge;

namespace {

Image image_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 3 || arr.shape(2) != 3)
        throw py::value_error("expected an (H, W, 3) array");
    Image img(static_cast<int>(arr.shape(0)), static_cast<int>(arr.shape(1)));
    std::copy(arr.data(), arr.data() + img.data.size(), img.data.begin());
    return img;
}

py::array_t<double> array_from_image(const Image& img) {
    py::array_t<double> arr({img.h, img.w, 3});
    std::copy(img.data.begin(), img.data.end(), arr.mutable_data());
    return arr;
}

py::list stack_to_list(const ParamStack& stack) {
    py::list out;
    for (const auto& m : stack.steps) out.append(array_from_image(m));
    return out;
}

CurveMode mode_from_str(const std::string& s) {
    if (s == "per_step_lookup") return CurveMode::PerStepLookup;
    if (s == "fixed_params") return CurveMode::FixedParams;
    throw py::value_error("mode must be per_step_lookup or fixed_params");
}

py::dict report_to_dict(const LossReport& r) {
    py::dict d;
    d["e"] = r.e;
    d["p"] = r.p;
    d["c"] = r.c;
    d["s"] = r.s;
    d["total"] = r.total;
    if (r.diff) d["diff"] = *r.diff;
    return d;
}

OptimConfig config_from_kwargs(OptimStage stage, int iterations, double learning_rate,
                               int lut_size, int curve_steps, const std::string& mode,
                               const std::string& optimizer, std::uint64_t seed,
                               double wmap_smooth_weight) {
    OptimConfig cfg = stage == OptimStage::Llut ? OptimConfig::llut_defaults()
                                                : OptimConfig::nlut_defaults();
    if (iterations > 0) cfg.iterations = iterations;
    if (learning_rate > 0.0) cfg.learning_rate = learning_rate;
    if (lut_size > 0) cfg.lut_size = lut_size;
    if (curve_steps > 0) cfg.curve_steps = curve_steps;
    cfg.curve_mode = mode_from_str(mode);
    cfg.kind = optimizer == "sgd" ? OptimKind::Sgd : OptimKind::Adam;
    cfg.seed = seed;
    cfg.wmap_smooth_weight = wmap_smooth_weight;
    return cfg;
}

} // namespace

PYBIND11_MODULE(_lutforge, m) {
    m.doc() = "3D-LUT low-light enhancement pipeline";

    py::enum_<ValueRange>(m, "ValueRange")
        .value("UNIT", ValueRange::Unit)
        .value("SIGNED", ValueRange::Signed);

    py::class_<Lut3D>(m, "Lut3D")
        .def(py::init<int, ValueRange>(), py::arg("size"), py::arg("value_range"))
        .def_static("identity", &Lut3D::identity, py::arg("size"), py::arg("value_range"))
        .def_property_readonly("size", &Lut3D::size)
        .def_property_readonly("value_range", &Lut3D::value_range)
        .def("lookup",
             [](const Lut3D& lut, double r, double g, double b) {
                 const Color c = lut.lookup({r, g, b});
                 return py::make_tuple(c.r, c.g, c.b);
             })
        .def("entries",
             [](const Lut3D& lut) {
                 const int n = lut.size();
                 py::array_t<double> arr({3, n, n, n});
                 std::copy(lut.entries().begin(), lut.entries().end(), arr.mutable_data());
                 return arr;
             })
        .def("set_entries",
             [](Lut3D& lut, const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
                 if (static_cast<std::size_t>(arr.size()) != lut.entries().size())
                     throw py::value_error("entry array size mismatch");
                 std::copy(arr.data(), arr.data() + arr.size(), lut.entries().begin());
                 lut.clamp_entries();
             })
        .def("save", &Lut3D::save)
        .def_static("load", &Lut3D::load);

    m.def("set_thread_count", &set_thread_count);
    m.def("load_image", [](const std::string& p) { return array_from_image(load_image(p)); });
    m.def("save_image",
          [](const py::array_t<double, py::array::c_style | py::array::forcecast>& a,
             const std::string& p) { save_image(image_from_array(a), p); });
    m.def("synth_value_noise",
          [](int h, int w, std::uint64_t seed, double mean, double amplitude) {
              return array_from_image(synth_value_noise(h, w, seed, mean, amplitude));
          },
          py::arg("h"), py::arg("w"), py::arg("seed") = 0, py::arg("mean") = 0.5,
          py::arg("amplitude") = 0.25);

    m.def("derive_params", [](const Lut3D& lut, const py::array_t<double>& img) {
        return array_from_image(derive_params(lut, image_from_array(img)));
    });
    m.def("curve_step", [](const py::array_t<double>& img, const py::array_t<double>& params) {
        return array_from_image(curve_step(image_from_array(img), image_from_array(params)));
    });
    m.def(
        "enhance",
        [](const Lut3D& lut, const py::array_t<double>& img, int n, const std::string& mode) {
            EnhanceResult r = enhance(lut, image_from_array(img), n, mode_from_str(mode));
            return py::make_tuple(array_from_image(r.image), stack_to_list(r.params));
        },
        py::arg("llut"), py::arg("image"), py::arg("n") = 8, py::arg("mode") = "per_step_lookup");

    m.def(
        "suppress",
        [](const Lut3D& nlut, const py::array_t<double>& coarse, const py::array_t<double>& wmap) {
            SuppressResult r = suppress(nlut, image_from_array(coarse), image_from_array(wmap));
            return py::make_tuple(array_from_image(r.image), array_from_image(r.pre_clamp));
        },
        py::arg("nlut"), py::arg("coarse"), py::arg("wmap"));
    m.def("forward_noise",
          [](const py::array_t<double>& img, int t, std::uint64_t seed) {
              return array_from_image(forward_noise(image_from_array(img), t,
                                                    NoiseSchedule::linear(), seed));
          },
          py::arg("image"), py::arg("t"), py::arg("seed") = 0);

    m.def("phase_only_reconstruction", [](const py::array_t<double>& img) {
        return array_from_image(phase_only_reconstruction(image_from_array(img)).image);
    });

    m.def("exposure_loss",
          [](const py::array_t<double>& img, double v, int region) {
              LossValue lv = exposure_loss(image_from_array(img), v, region);
              return py::make_tuple(lv.value, array_from_image(lv.grad));
          },
          py::arg("image"), py::arg("v") = 0.65, py::arg("region") = 16);
    m.def("structural_loss", [](const py::array_t<double>& a, const py::array_t<double>& b) {
        LossValue lv = structural_loss(image_from_array(a), image_from_array(b));
        return py::make_tuple(lv.value, array_from_image(lv.grad));
    });
    m.def("color_loss", [](const py::array_t<double>& img) {
        LossValue lv = color_loss(image_from_array(img));
        return py::make_tuple(lv.value, array_from_image(lv.grad));
    });
    m.def("diff_loss", [](const py::array_t<double>& ref, const py::array_t<double>& out) {
        LossValue lv = diff_loss(image_from_array(ref), image_from_array(out));
        return py::make_tuple(lv.value, array_from_image(lv.grad));
    });
    m.def("total_loss",
          [](const py::array_t<double>& input, const py::array_t<double>& enhanced,
             const py::list& params) {
              ParamStack stack;
              for (const auto& p : params)
                  stack.steps.push_back(image_from_array(py::cast<py::array_t<double>>(p)));
              TotalLoss t = total_loss(image_from_array(input), image_from_array(enhanced), stack,
                                       LossWeights{});
              return report_to_dict(t.report);
          });

    m.def(
        "fit_llut",
        [](const py::array_t<double>& img, int iterations, double learning_rate, int lut_size,
           int curve_steps, const std::string& mode, const std::string& optimizer,
           std::uint64_t seed) {
            OptimConfig cfg = config_from_kwargs(OptimStage::Llut, iterations, learning_rate,
                                                 lut_size, curve_steps, mode, optimizer, seed, 0.1);
            LlutFit fit = fit_llut(image_from_array(img), cfg);
            py::list trace;
            for (const auto& r : fit.trace) trace.append(report_to_dict(r));
            return py::make_tuple(fit.lut, trace);
        },
        py::arg("image"), py::arg("iterations") = 0, py::arg("learning_rate") = 0.0,
        py::arg("lut_size") = 0, py::arg("curve_steps") = 0,
        py::arg("mode") = "per_step_lookup", py::arg("optimizer") = "adam", py::arg("seed") = 0);

    m.def(
        "fit_nlut",
        [](const py::array_t<double>& coarse, const py::array_t<double>& ref, int iterations,
           double learning_rate, int lut_size, const std::string& optimizer, std::uint64_t seed,
           double wmap_smooth_weight) {
            OptimConfig cfg =
                config_from_kwargs(OptimStage::Nlut, iterations, learning_rate, lut_size, 0,
                                   "per_step_lookup", optimizer, seed, wmap_smooth_weight);
            NlutFit fit = fit_nlut(image_from_array(coarse), image_from_array(ref), cfg);
            py::list trace;
            for (const auto& r : fit.trace) trace.append(report_to_dict(r));
            return py::make_tuple(fit.lut, array_from_image(fit.wmap), trace);
        },
        py::arg("coarse"), py::arg("pseudo_ref"), py::arg("iterations") = 0,
        py::arg("learning_rate") = 0.0, py::arg("lut_size") = 0, py::arg("optimizer") = "adam",
        py::arg("seed") = 0, py::arg("wmap_smooth_weight") = 0.1);

    m.def("psnr", [](const py::array_t<double>& a, const py::array_t<double>& b) {
        return psnr(image_from_array(a), image_from_array(b));
    });
    m.def("ssim", [](const py::array_t<double>& a, const py::array_t<double>& b) {
        return ssim(image_from_array(a), image_from_array(b));
    });
}
