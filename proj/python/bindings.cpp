#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "stereotest/dataset.hpp"
#include "stereotest/error.hpp"
#include "stereotest/geometry.hpp"
#include "stereotest/json_io.hpp"
#include "stereotest/oracle.hpp"
#include "stereotest/renderer.hpp"
#include "stereotest/staircase.hpp"
#include "stereotest/stats.hpp"

namespace py = pybind11;

namespace {

py::object to_python(const stereo::json& j) {
  switch (j.type()) {
    case stereo::json::value_t::null: return py::none();
    case stereo::json::value_t::boolean: return py::bool_(j.get<bool>());
    case stereo::json::value_t::number_integer: return py::int_(j.get<std::int64_t>());
    case stereo::json::value_t::number_unsigned: return py::int_(j.get<std::uint64_t>());
    case stereo::json::value_t::number_float: return py::float_(j.get<double>());
    case stereo::json::value_t::string: return py::str(j.get<std::string>());
    case stereo::json::value_t::array: {
      py::list out;
      for (const auto& item : j) out.append(to_python(item));
      return std::move(out);
    }
    case stereo::json::value_t::object: {
      py::dict out;
      for (const auto& [key, value] : j.items()) out[py::str(key)] = to_python(value);
      return std::move(out);
    }
    default: return py::none();
  }
}

stereo::Acuity acuity_from(const py::object& value) {
  if (py::isinstance<py::str>(value)) return stereo::Acuity::parse(value.cast<std::string>());
  return stereo::Acuity::arcsec(value.cast<double>());
}

py::object acuity_to(const std::optional<stereo::Acuity>& a) {
  if (!a) return py::none();
  if (a->is_outside_limits()) return py::str("OL");
  return py::float_(a->arcsec());
}

stereo::Orientation orientation_from(const std::string& text) {
  auto o = stereo::parse_orientation(text);
  if (!o) throw stereo::Error(stereo::ErrorCode::InvalidInput, "bad orientation " + text);
  return *o;
}

stereo::AnaglyphImage image_from(const py::array_t<std::uint8_t, py::array::c_style>& array) {
  if (array.ndim() != 3 || array.shape(2) != 3) {
    throw stereo::Error(stereo::ErrorCode::InvalidInput, "image must be an (H, W, 3) uint8 array");
  }
  stereo::AnaglyphImage img(static_cast<int>(array.shape(1)), static_cast<int>(array.shape(0)));
  std::copy(array.data(), array.data() + array.size(), img.pixels.begin());
  return img;
}

py::array_t<std::uint8_t> image_to(const stereo::AnaglyphImage& img) {
  py::array_t<std::uint8_t> out({img.height_px, img.width_px, 3});
  std::copy(img.pixels.begin(), img.pixels.end(), out.mutable_data());
  return out;
}

py::array_t<bool> raster_to(const stereo::BitRaster& r) {
  py::array_t<bool> out({r.height(), r.width()});
  auto view = out.mutable_unchecked<2>();
  for (int y = 0; y < r.height(); ++y) {
    for (int x = 0; x < r.width(); ++x) view(y, x) = r.at(x, y);
  }
  return out;
}

stereo::KappaWeights weights_from(const std::string& text) {
  if (text == "linear") return stereo::KappaWeights::Linear;
  if (text == "quadratic") return stereo::KappaWeights::Quadratic;
  throw stereo::Error(stereo::ErrorCode::InvalidInput, "weights must be linear or quadratic");
}

stereo::StereogramSpec spec_from(const stereo::DisplayProfile& profile, double distance_m,
                                 int level, const std::string& orientation, std::uint64_t seed,
                                 double coverage, int n_levels) {
  const auto table = stereo::build_level_table(profile, distance_m, n_levels);
  auto spec = stereo::make_stereogram_spec(profile, table, level, orientation_from(orientation), seed);
  spec.dot_coverage = coverage;
  return spec;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Random-dot stereoacuity toolkit";

  static py::exception<stereo::Error> error_type(m, "StereoError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const stereo::Error& e) {
      py::object type = error_type;
      py::object exc = type(e.what());
      exc.attr("code") = std::string(stereo::to_string(e.code()));
      PyErr_SetObject(error_type.ptr(), exc.ptr());
    }
  });

  py::class_<stereo::DisplayProfile>(m, "DisplayProfile")
      .def(py::init([](double ppi, int width_px, int height_px) {
             stereo::DisplayProfile p{ppi, width_px, height_px};
             stereo::validate(p);
             return p;
           }),
           py::arg("ppi"), py::arg("width_px") = 2048, py::arg("height_px") = 1536)
      .def_readonly("ppi", &stereo::DisplayProfile::ppi)
      .def_readonly("width_px", &stereo::DisplayProfile::width_px)
      .def_readonly("height_px", &stereo::DisplayProfile::height_px)
      .def_static("preset", [](const std::string& name) {
        auto p = stereo::display_preset(name);
        if (!p) throw stereo::Error(stereo::ErrorCode::InvalidProfile, "unknown preset " + name);
        return *p;
      })
      .def("__repr__", [](const stereo::DisplayProfile& p) {
        return "DisplayProfile(ppi=" + std::to_string(p.ppi) + ", " + std::to_string(p.width_px) +
               "x" + std::to_string(p.height_px) + ")";
      });

  m.def("pixel_pitch", &stereo::pixel_pitch, py::arg("profile"));
  m.def("disparity_arcsec", &stereo::disparity_arcsec, py::arg("shift_px"), py::arg("profile"),
        py::arg("distance_m"));
  m.def(
      "build_level_table",
      [](const stereo::DisplayProfile& profile, double distance_m, int n_levels, double reference) {
        return to_python(stereo::json(stereo::build_level_table(profile, distance_m, n_levels, reference)));
      },
      py::arg("profile"), py::arg("distance_m"), py::arg("n_levels") = stereo::kDefaultLevelCount,
      py::arg("reference_distance_m") = stereo::kReferenceDistanceM);
  m.def("distance_scale_k", &stereo::distance_scale_k, py::arg("distance_m"), py::arg("reference_m"));
  m.def("hd_arcsec", &stereo::hd_arcsec, py::arg("ipd_m"), py::arg("delta_z_m"), py::arg("distance_m"));
  m.def(
      "hd_protocol",
      [](std::vector<double> delta_z_m, double ipd_m, double distance_m, double ol_limit) {
        return acuity_to(stereo::hd_protocol({std::move(delta_z_m), ipd_m, distance_m}, ol_limit));
      },
      py::arg("delta_z_m"), py::arg("ipd_m") = stereo::kDefaultIpdM, py::arg("distance_m") = 3.0,
      py::arg("ol_limit_arcsec") = stereo::kHdOutsideLimitArcsec);
  m.def("dot_size_px", &stereo::dot_size_px, py::arg("profile"), py::arg("distance_m"));
  m.def("stimulus_size_px", &stereo::stimulus_size_px, py::arg("profile"));

  m.def(
      "render",
      [](const stereo::DisplayProfile& profile, double distance_m, int level,
         const std::string& orientation, std::uint64_t seed, double coverage, int n_levels) {
        return image_to(stereo::render(
            spec_from(profile, distance_m, level, orientation, seed, coverage, n_levels)));
      },
      py::arg("profile"), py::arg("distance_m"), py::arg("level"), py::arg("orientation") = "up",
      py::arg("seed") = 1, py::arg("coverage") = stereo::kDefaultDotCoverage,
      py::arg("n_levels") = stereo::kDefaultLevelCount);
  m.def(
      "ground_truth_mask",
      [](const stereo::DisplayProfile& profile, double distance_m, int level,
         const std::string& orientation, int n_levels) {
        return raster_to(stereo::ground_truth_mask(
            spec_from(profile, distance_m, level, orientation, 0, stereo::kDefaultDotCoverage, n_levels)));
      },
      py::arg("profile"), py::arg("distance_m"), py::arg("level"), py::arg("orientation") = "up",
      py::arg("n_levels") = stereo::kDefaultLevelCount);
  m.def(
      "decode",
      [](const py::array_t<std::uint8_t, py::array::c_style>& image, int search_range) {
        stereo::DecoderOptions options;
        options.search_range = search_range;
        return to_python(stereo::to_json(stereo::decode(image_from(image), options)));
      },
      py::arg("image"), py::arg("search_range") = stereo::kDefaultSearchRange);

  m.def(
      "simulate",
      [](const std::string& observer, const stereo::DisplayProfile& profile, double distance_m,
         std::uint64_t seed, int n_levels) {
        const auto table = stereo::build_level_table(profile, distance_m, n_levels);
        return to_python(stereo::json(
            stereo::simulate(stereo::parse_observer(observer, seed), table, profile, seed)));
      },
      py::arg("observer"), py::arg("profile"), py::arg("distance_m"), py::arg("seed") = 1,
      py::arg("n_levels") = stereo::kDefaultLevelCount);

  m.def("recode_near", [](const py::object& v) { return stereo::recode_near(acuity_from(v)); },
        py::arg("value"));
  m.def("recode_far", [](const py::object& v) { return stereo::recode_far(acuity_from(v)); },
        py::arg("value"));
  m.def("landis_koch", [](double kappa) { return std::string(stereo::to_string(stereo::landis_koch(kappa))); },
        py::arg("kappa"));
  m.def(
      "weighted_kappa",
      [](const std::vector<std::vector<long>>& counts, const std::string& weights) {
        stereo::ConfusionMatrix matrix(static_cast<int>(counts.size()));
        for (std::size_t i = 0; i < counts.size(); ++i) {
          if (counts[i].size() != counts.size()) {
            throw stereo::Error(stereo::ErrorCode::InvalidInput, "confusion matrix must be square");
          }
          for (std::size_t j = 0; j < counts.size(); ++j) {
            matrix.at(static_cast<int>(i), static_cast<int>(j)) = counts[i][j];
          }
        }
        return to_python(stereo::to_json(stereo::weighted_kappa(matrix, weights_from(weights))));
      },
      py::arg("counts"), py::arg("weights") = "linear");
  m.def(
      "wilcoxon",
      [](const std::vector<std::pair<double, double>>& pairs) {
        return to_python(stereo::to_json(stereo::wilcoxon(pairs)));
      },
      py::arg("pairs"));
  m.def(
      "analyze_csv",
      [](const std::string& path) {
        return to_python(stereo::to_json(stereo::analyze(stereo::read_dataset_file(path))));
      },
      py::arg("path"));
}
