/* Copyright (c) 2026 The eptpinn Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License. */

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "eptpinn/pipeline.hpp"

namespace py = pybind11;
using namespace eptpinn;

namespace {

py::object json_to_py(const nlohmann::ordered_json& j) {
  switch (j.type()) {
    case nlohmann::json::value_t::null: return py::none();
    case nlohmann::json::value_t::boolean: return py::bool_(j.get<bool>());
    case nlohmann::json::value_t::number_integer:
      return py::int_(j.get<long long>());
    case nlohmann::json::value_t::number_unsigned:
      return py::int_(j.get<unsigned long long>());
    case nlohmann::json::value_t::number_float:
      return py::float_(j.get<double>());
    case nlohmann::json::value_t::string: return py::str(j.get<std::string>());
    case nlohmann::json::value_t::array: {
      py::list out;
      for (const auto& item : j) out.append(json_to_py(item));
      return out;
    }
    case nlohmann::json::value_t::object: {
      py::dict out;
      for (auto it = j.begin(); it != j.end(); ++it) {
        out[py::str(it.key())] = json_to_py(it.value());
      }
      return out;
    }
    default: return py::none();
  }
}

std::array<py::ssize_t, 3> grid_shape(const sim::Grid& g) {
  // x-fastest memory order: numpy shape (nz, ny, nx), C-contiguous.
  return {g.dims[2], g.dims[1], g.dims[0]};
}

py::dict sample_model(const std::string& model_path,
                      std::optional<std::array<int, 3>> dims) {
  const auto model = io::read_model(model_path);
  sim::Grid grid = model.train_grid;
  if (dims) {
    sim::Grid g;
    g.dims = Eigen::Vector3i((*dims)[0], (*dims)[1], (*dims)[2]);
    const Eigen::Vector3d extent = model.train_grid.extent();
    for (int d = 0; d < 3; ++d) g.spacing[d] = extent[d] / (g.dims[d] - 1);
    g.origin = model.train_grid.origin;
    g.validate();
    grid = g;
  }
  const auto maps = eval::sample_networks(
      model.field, model.eps, model.field_scale, grid,
      model.train_grid.coordinate_map(), model.constants);

  const auto shape = grid_shape(grid);
  py::array_t<std::complex<double>> b1(shape);
  py::array_t<double> eps_r(shape), sigma(shape);
  std::copy(maps.b1.begin(), maps.b1.end(), b1.mutable_data());
  std::copy(maps.eps_r.begin(), maps.eps_r.end(), eps_r.mutable_data());
  std::copy(maps.sigma.begin(), maps.sigma.end(), sigma.mutable_data());

  py::dict out;
  out["b1"] = b1;
  out["eps_r"] = eps_r;
  out["sigma"] = sigma;
  out["dims"] = py::make_tuple(grid.dims[0], grid.dims[1], grid.dims[2]);
  return out;
}

py::dict dataset_arrays(const std::string& path) {
  const auto ds = io::read_dataset(path);
  const auto shape = grid_shape(ds.grid);
  py::array_t<std::complex<double>> field(shape), noisy(shape);
  py::array_t<double> eps_r(shape), sigma(shape);
  py::array_t<std::uint8_t> interior(shape), available(shape);
  std::copy(ds.field.begin(), ds.field.end(), field.mutable_data());
  std::copy(ds.noisy_field.begin(), ds.noisy_field.end(), noisy.mutable_data());
  std::copy(ds.eps_r_truth.begin(), ds.eps_r_truth.end(), eps_r.mutable_data());
  std::copy(ds.sigma_truth.begin(), ds.sigma_truth.end(), sigma.mutable_data());
  std::copy(ds.interior_mask.begin(), ds.interior_mask.end(),
            interior.mutable_data());
  std::copy(ds.availability_mask.begin(), ds.availability_mask.end(),
            available.mutable_data());

  py::dict out;
  out["field"] = field;
  out["noisy_field"] = noisy;
  out["eps_r"] = eps_r;
  out["sigma"] = sigma;
  out["interior_mask"] = interior;
  out["availability_mask"] = available;
  out["dims"] = py::make_tuple(ds.grid.dims[0], ds.grid.dims[1], ds.grid.dims[2]);
  out["frequency_hz"] = ds.constants.frequency_hz;
  return out;
}

template <typename T>
double pnae_array(py::array_t<T, py::array::c_style | py::array::forcecast> pred,
                  py::array_t<T, py::array::c_style | py::array::forcecast> truth,
                  py::array_t<std::uint8_t,
                              py::array::c_style | py::array::forcecast> mask) {
  if (pred.size() != truth.size() || pred.size() != mask.size()) {
    throw std::invalid_argument("pnae: arrays must have equal sizes");
  }
  return eval::pnae(
      std::span<const T>(pred.data(), static_cast<std::size_t>(pred.size())),
      std::span<const T>(truth.data(), static_cast<std::size_t>(truth.size())),
      std::span<const std::uint8_t>(mask.data(),
                                    static_cast<std::size_t>(mask.size())));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Physics-informed reconstruction of electrical properties from "
            "noisy B1+ field maps";

  m.def("generate", &pipeline::generate_to_file, py::arg("config_json"),
        py::arg("out"), py::arg("seed") = std::nullopt,
        "Synthesize a dataset file from a generation config JSON string.");

  m.def(
      "train",
      [](const std::string& data, const std::string& config_json,
         const std::string& out, const std::string& log,
         const std::string& checkpoint_prefix) {
        const auto summary = pipeline::train_to_file(data, config_json, out,
                                                     log, checkpoint_prefix);
        py::dict d;
        d["iterations"] = summary.iterations;
        d["final_total"] = summary.final_total;
        d["final_data"] = summary.final_data;
        d["final_residual"] = summary.final_residual;
        return d;
      },
      py::arg("data"), py::arg("config_json"), py::arg("out"),
      py::arg("log") = std::string(),
      py::arg("checkpoint_prefix") = std::string(),
      "Train both networks on a dataset file and write the model file.");

  m.def(
      "evaluate",
      [](const std::string& data, const std::string& model,
         std::optional<std::array<int, 3>> grid) {
        std::optional<Eigen::Vector3i> dims;
        if (grid) dims = Eigen::Vector3i((*grid)[0], (*grid)[1], (*grid)[2]);
        return json_to_py(pipeline::evaluate_report(data, model, dims, false));
      },
      py::arg("data"), py::arg("model"), py::arg("grid") = std::nullopt,
      "PNAE report of a trained model against a dataset.");

  m.def("export_slice", &pipeline::export_slice_file, py::arg("model"),
        py::arg("map"), py::arg("component"), py::arg("axis"),
        py::arg("index"), py::arg("out"),
        "Write one CSV slice of a sampled map.");

  m.def("sample", &sample_model, py::arg("model"),
        py::arg("dims") = std::nullopt,
        "Sample B1+, eps_r and sigma maps from a model on its training grid "
        "or an alternate resolution; arrays are indexed [z, y, x].");

  m.def("load_dataset", &dataset_arrays, py::arg("path"),
        "Load a dataset file as numpy arrays indexed [z, y, x].");

  m.def("pnae", &pnae_array<double>, py::arg("pred"), py::arg("truth"),
        py::arg("mask"),
        "Peak normalized absolute error (percent) of a real map.");
  m.def("pnae_complex", &pnae_array<std::complex<double>>, py::arg("pred"),
        py::arg("truth"), py::arg("mask"),
        "Peak normalized absolute error (percent) of a complex map.");

#ifdef EPTPINN_VERSION
  m.attr("__version__") = EPTPINN_VERSION;
#else
  m.attr("__version__") = "dev";
#endif
}
