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

#include "eptpinn/io.hpp"

#include <bit>
#include <fstream>

namespace eptpinn::io {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 8);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

std::uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

void put_f64_array(std::ostream& out, const double* data, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    put_u64(out, std::bit_cast<std::uint64_t>(data[i]));
  }
}

void get_f64_array(std::istream& in, double* data, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    data[i] = std::bit_cast<double>(get_u64(in));
  }
}

void check_stream(const std::ios& s, const std::string& what) {
  if (!s.good()) {
    throw std::runtime_error("io: " + what + " failed");
  }
}

json vector3_to_json(const Eigen::Vector3d& v) {
  return json::array({v[0], v[1], v[2]});
}

Eigen::Vector3d vector3_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) {
    throw std::invalid_argument("io: expected a 3-element array");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

ordered_json cylinder_to_json(const sim::Cylinder& c) {
  ordered_json j;
  j["center_m"] = vector3_to_json(c.center);
  j["radius_m"] = c.radius;
  j["height_m"] = c.height;
  j["eps_r"] = c.eps_r;
  j["sigma_s_per_m"] = c.sigma;
  return j;
}

sim::Cylinder cylinder_from_json(const json& j) {
  sim::Cylinder c;
  c.center = vector3_from_json(j.at("center_m"));
  c.radius = j.at("radius_m").get<double>();
  c.height = j.at("height_m").get<double>();
  c.eps_r = j.at("eps_r").get<double>();
  c.sigma = j.at("sigma_s_per_m").get<double>();
  return c;
}

int axis_from_json(const json& j) {
  const std::string s = j.get<std::string>();
  if (s == "x") return 0;
  if (s == "y") return 1;
  if (s == "z") return 2;
  throw std::invalid_argument("io: axis must be x, y or z");
}

const char* axis_name(int axis) {
  static const char* names[3] = {"x", "y", "z"};
  return names[axis];
}

}  // namespace

nlohmann::ordered_json grid_to_json(const sim::Grid& g) {
  ordered_json j;
  j["dims"] = json::array({g.dims[0], g.dims[1], g.dims[2]});
  j["spacing_m"] = vector3_to_json(g.spacing);
  j["origin_m"] = vector3_to_json(g.origin);
  return j;
}

sim::Grid grid_from_json(const json& j) {
  sim::Grid g;
  const auto& dims = j.at("dims");
  if (!dims.is_array() || dims.size() != 3) {
    throw std::invalid_argument("io: grid dims must be a 3-element array");
  }
  g.dims = Eigen::Vector3i(dims[0].get<int>(), dims[1].get<int>(),
                           dims[2].get<int>());
  if (j.contains("spacing_m")) {
    g.spacing = vector3_from_json(j.at("spacing_m"));
    g.origin = vector3_from_json(j.at("origin_m"));
  } else {
    // Friendlier config form: a box given by extent and center, points
    // spanning it inclusively.
    const Eigen::Vector3d extent = vector3_from_json(j.at("extent_m"));
    const Eigen::Vector3d center = j.contains("center_m")
                                       ? vector3_from_json(j.at("center_m"))
                                       : Eigen::Vector3d::Zero();
    for (int d = 0; d < 3; ++d) {
      g.spacing[d] = extent[d] / (g.dims[d] - 1);
    }
    g.origin = center - 0.5 * extent;
  }
  g.validate();
  return g;
}

nlohmann::ordered_json phantom_to_json(const sim::PhantomSpec& spec) {
  ordered_json j;
  j["outer"] = cylinder_to_json(spec.outer);
  j["compartments"] = json::array();
  for (const auto& c : spec.compartments) {
    j["compartments"].push_back(cylinder_to_json(c));
  }
  return j;
}

sim::PhantomSpec phantom_from_json(const json& j) {
  sim::PhantomSpec spec;
  spec.outer = cylinder_from_json(j.at("outer"));
  if (j.contains("compartments")) {
    for (const auto& c : j.at("compartments")) {
      spec.compartments.push_back(cylinder_from_json(c));
    }
  }
  spec.validate();
  return spec;
}

nlohmann::ordered_json mask_to_json(const sim::MaskSpec& m) {
  ordered_json j;
  j["kind"] = (m.kind == sim::MaskKind::kFull) ? "full" : "half";
  if (m.kind == sim::MaskKind::kHalf) {
    j["axis"] = axis_name(m.axis);
    j["side"] = m.upper ? "upper" : "lower";
  }
  return j;
}

sim::MaskSpec mask_from_json(const json& j) {
  sim::MaskSpec m;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "full") {
    m.kind = sim::MaskKind::kFull;
  } else if (kind == "half") {
    m.kind = sim::MaskKind::kHalf;
    m.axis = axis_from_json(j.at("axis"));
    const std::string side = j.value("side", "upper");
    if (side != "upper" && side != "lower") {
      throw std::invalid_argument("io: mask side must be upper or lower");
    }
    m.upper = side == "upper";
  } else {
    throw std::invalid_argument("io: mask kind must be full or half");
  }
  m.validate();
  return m;
}

nlohmann::ordered_json mlp_config_to_json(const net::MlpConfig& c) {
  ordered_json j;
  j["input_dim"] = c.input_dim;
  j["hidden_layers"] = c.hidden_layers;
  j["hidden_width"] = c.hidden_width;
  j["output_dim"] = c.output_dim;
  j["omega0"] = c.omega0;
  return j;
}

net::MlpConfig mlp_config_from_json(const json& j) {
  net::MlpConfig c;
  c.input_dim = j.value("input_dim", c.input_dim);
  c.hidden_layers = j.value("hidden_layers", c.hidden_layers);
  c.hidden_width = j.value("hidden_width", c.hidden_width);
  c.output_dim = j.value("output_dim", c.output_dim);
  c.omega0 = j.value("omega0", c.omega0);
  c.validate();
  return c;
}

void write_dataset(const std::string& path, const sim::SyntheticDataset& ds) {
  ds.validate();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  check_stream(out, "open " + path);

  ordered_json header;
  header["format_version"] = kDatasetFormatVersion;
  header["grid"] = grid_to_json(ds.grid);
  header["constants"] = {{"frequency_hz", ds.constants.frequency_hz}};
  header["phantom"] = phantom_to_json(ds.phantom);
  header["seed"] = ds.noise_seed;
  if (ds.peak_snr.has_value()) {
    header["peak_snr"] = *ds.peak_snr;
  } else {
    header["peak_snr"] = nullptr;
  }
  header["scale_factor"] = ds.scale_factor;
  header["mask"] = mask_to_json(ds.mask);
  const std::string header_str = header.dump();

  out.write("EPTD", 4);
  put_u32(out, kDatasetFormatVersion);
  put_u64(out, header_str.size());
  out.write(header_str.data(), static_cast<std::streamsize>(header_str.size()));

  const std::size_t n = ds.field.size();
  std::vector<double> scratch(n);
  auto write_component = [&](auto&& getter) {
    for (std::size_t i = 0; i < n; ++i) scratch[i] = getter(i);
    put_f64_array(out, scratch.data(), n);
  };
  write_component([&](std::size_t i) { return ds.field[i].real(); });
  write_component([&](std::size_t i) { return ds.field[i].imag(); });
  write_component([&](std::size_t i) { return ds.noisy_field[i].real(); });
  write_component([&](std::size_t i) { return ds.noisy_field[i].imag(); });
  put_f64_array(out, ds.eps_r_truth.data(), n);
  put_f64_array(out, ds.sigma_truth.data(), n);
  out.write(reinterpret_cast<const char*>(ds.interior_mask.data()),
            static_cast<std::streamsize>(n));
  out.write(reinterpret_cast<const char*>(ds.availability_mask.data()),
            static_cast<std::streamsize>(n));
  check_stream(out, "write " + path);
}

sim::SyntheticDataset read_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  check_stream(in, "open " + path);

  char magic[4];
  in.read(magic, 4);
  if (!in.good() || std::string(magic, 4) != "EPTD") {
    throw std::runtime_error("io: " + path + " is not a dataset file");
  }
  const std::uint32_t version = get_u32(in);
  if (version != kDatasetFormatVersion) {
    throw std::runtime_error("io: unsupported dataset format version " +
                             std::to_string(version));
  }
  const std::uint64_t header_len = get_u64(in);
  std::string header_str(header_len, '\0');
  in.read(header_str.data(), static_cast<std::streamsize>(header_len));
  check_stream(in, "read header of " + path);
  const json header = json::parse(header_str);

  sim::SyntheticDataset ds;
  ds.grid = grid_from_json(header.at("grid"));
  ds.constants.frequency_hz =
      header.at("constants").at("frequency_hz").get<double>();
  ds.phantom = phantom_from_json(header.at("phantom"));
  ds.noise_seed = header.value("seed", std::uint64_t{0});
  if (header.contains("peak_snr") && !header.at("peak_snr").is_null()) {
    ds.peak_snr = header.at("peak_snr").get<double>();
  }
  ds.scale_factor = header.value("scale_factor", 1.0);
  ds.mask = mask_from_json(header.at("mask"));

  const std::size_t n = static_cast<std::size_t>(ds.grid.size());
  std::vector<double> re(n), im(n);
  auto read_complex = [&](std::vector<std::complex<double>>& dst) {
    get_f64_array(in, re.data(), n);
    get_f64_array(in, im.data(), n);
    dst.resize(n);
    for (std::size_t i = 0; i < n; ++i) dst[i] = {re[i], im[i]};
  };
  read_complex(ds.field);
  read_complex(ds.noisy_field);
  ds.eps_r_truth.resize(n);
  ds.sigma_truth.resize(n);
  get_f64_array(in, ds.eps_r_truth.data(), n);
  get_f64_array(in, ds.sigma_truth.data(), n);
  ds.interior_mask.resize(n);
  ds.availability_mask.resize(n);
  in.read(reinterpret_cast<char*>(ds.interior_mask.data()),
          static_cast<std::streamsize>(n));
  in.read(reinterpret_cast<char*>(ds.availability_mask.data()),
          static_cast<std::streamsize>(n));
  check_stream(in, "read " + path);
  ds.validate();
  return ds;
}

void write_model(const std::string& path, const ModelFile& model) {
  model.field.config.validate();
  model.eps.config.validate();
  model.train_grid.validate();
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  check_stream(out, "open " + path);

  const Eigen::VectorXd field_flat = model.field.flatten();
  const Eigen::VectorXd eps_flat = model.eps.flatten();

  ordered_json meta;
  meta["format_version"] = kModelFormatVersion;
  meta["iteration"] = model.iteration;
  meta["field_scale"] = model.field_scale;
  meta["constants"] = {{"frequency_hz", model.constants.frequency_hz}};
  meta["grid"] = grid_to_json(model.train_grid);
  meta["networks"] = json::array();
  {
    ordered_json f;
    f["role"] = "field";
    f["seed"] = model.field_seed;
    f["config"] = mlp_config_to_json(model.field.config);
    f["count"] = field_flat.size();
    meta["networks"].push_back(f);
    ordered_json e;
    e["role"] = "permittivity";
    e["seed"] = model.eps_seed;
    e["config"] = mlp_config_to_json(model.eps.config);
    e["count"] = eps_flat.size();
    meta["networks"].push_back(e);
  }
  meta["optimizer"] = {{"present", model.optimizer.has_value()}};
  if (model.optimizer) {
    meta["optimizer"]["t"] = model.optimizer->t;
  }
  const std::string meta_str = meta.dump();

  out.write("EPTM", 4);
  put_u32(out, kModelFormatVersion);
  put_u64(out, meta_str.size());
  out.write(meta_str.data(), static_cast<std::streamsize>(meta_str.size()));
  put_f64_array(out, field_flat.data(), static_cast<std::size_t>(field_flat.size()));
  put_f64_array(out, eps_flat.data(), static_cast<std::size_t>(eps_flat.size()));
  if (model.optimizer) {
    const auto& opt = *model.optimizer;
    if (opt.m.size() != field_flat.size() + eps_flat.size() ||
        opt.v.size() != opt.m.size()) {
      throw std::invalid_argument("write_model: optimizer state size mismatch");
    }
    put_f64_array(out, opt.m.data(), static_cast<std::size_t>(opt.m.size()));
    put_f64_array(out, opt.v.data(), static_cast<std::size_t>(opt.v.size()));
  }
  check_stream(out, "write " + path);
}

ModelFile read_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  check_stream(in, "open " + path);

  char magic[4];
  in.read(magic, 4);
  if (!in.good() || std::string(magic, 4) != "EPTM") {
    throw std::runtime_error("io: " + path + " is not a model file");
  }
  const std::uint32_t version = get_u32(in);
  if (version != kModelFormatVersion) {
    throw std::runtime_error("io: unsupported model format version " +
                             std::to_string(version));
  }
  const std::uint64_t meta_len = get_u64(in);
  std::string meta_str(meta_len, '\0');
  in.read(meta_str.data(), static_cast<std::streamsize>(meta_len));
  check_stream(in, "read metadata of " + path);
  const json meta = json::parse(meta_str);

  ModelFile model;
  model.iteration = meta.at("iteration").get<long>();
  model.field_scale = meta.at("field_scale").get<double>();
  model.constants.frequency_hz =
      meta.at("constants").at("frequency_hz").get<double>();
  model.train_grid = grid_from_json(meta.at("grid"));

  const auto& nets = meta.at("networks");
  if (!nets.is_array() || nets.size() != 2) {
    throw std::runtime_error("io: model must hold exactly two networks");
  }
  const net::MlpConfig field_cfg = mlp_config_from_json(nets[0].at("config"));
  const net::MlpConfig eps_cfg = mlp_config_from_json(nets[1].at("config"));
  model.field_seed = nets[0].value("seed", std::uint64_t{0});
  model.eps_seed = nets[1].value("seed", std::uint64_t{0});

  const auto n_field = static_cast<Eigen::Index>(field_cfg.parameter_count());
  const auto n_eps = static_cast<Eigen::Index>(eps_cfg.parameter_count());
  Eigen::VectorXd field_flat(n_field), eps_flat(n_eps);
  get_f64_array(in, field_flat.data(), static_cast<std::size_t>(n_field));
  get_f64_array(in, eps_flat.data(), static_cast<std::size_t>(n_eps));
  model.field = net::MlpParams::unflatten(field_cfg, field_flat);
  model.eps = net::MlpParams::unflatten(eps_cfg, eps_flat);

  if (meta.at("optimizer").at("present").get<bool>()) {
    train::AdamState opt;
    opt.t = meta.at("optimizer").at("t").get<long>();
    opt.m.resize(n_field + n_eps);
    opt.v.resize(n_field + n_eps);
    get_f64_array(in, opt.m.data(), static_cast<std::size_t>(opt.m.size()));
    get_f64_array(in, opt.v.data(), static_cast<std::size_t>(opt.v.size()));
    model.optimizer = std::move(opt);
  }
  check_stream(in, "read " + path);
  return model;
}

sim::GenerateConfig parse_generate_config(const json& j) {
  sim::GenerateConfig cfg;
  cfg.grid = grid_from_json(j.at("grid"));
  if (j.contains("constants")) {
    cfg.constants.frequency_hz =
        j.at("constants").value("frequency_hz", cfg.constants.frequency_hz);
  }
  if (j.contains("phantom")) {
    cfg.phantom = phantom_from_json(j.at("phantom"));
  }
  if (j.contains("excitation")) {
    cfg.incidence = vector3_from_json(j.at("excitation").at("direction"));
  }
  if (j.contains("noise") && !j.at("noise").is_null()) {
    const auto& noise = j.at("noise");
    if (noise.contains("peak_snr") && !noise.at("peak_snr").is_null()) {
      cfg.peak_snr = noise.at("peak_snr").get<double>();
    }
    cfg.seed = noise.value("seed", std::uint64_t{0});
  }
  if (j.contains("mask")) {
    cfg.mask = mask_from_json(j.at("mask"));
  }
  return cfg;
}

TrainJobConfig parse_train_config(const json& j) {
  TrainJobConfig cfg;
  if (j.contains("field_net")) {
    cfg.field_config = mlp_config_from_json(j.at("field_net"));
    cfg.train.field_seed = j.at("field_net").value("seed", cfg.train.field_seed);
  }
  if (j.contains("eps_net")) {
    cfg.eps_config = mlp_config_from_json(j.at("eps_net"));
    cfg.train.eps_seed = j.at("eps_net").value("seed", cfg.train.eps_seed);
  }
  if (j.contains("train")) {
    const auto& t = j.at("train");
    auto& tc = cfg.train;
    tc.total_iterations = t.value("total_iterations", tc.total_iterations);
    if (t.contains("lr_schedule")) {
      tc.lr_schedule.clear();
      for (const auto& stage : t.at("lr_schedule")) {
        if (!stage.is_array() || stage.size() != 2) {
          throw std::invalid_argument(
              "io: lr_schedule entries must be [start, rate]");
        }
        tc.lr_schedule.push_back(
            {stage[0].get<long>(), stage[1].get<double>()});
      }
    }
    tc.lambda = t.value("lambda", tc.lambda);
    tc.beta1 = t.value("beta1", tc.beta1);
    tc.beta2 = t.value("beta2", tc.beta2);
    tc.eps_hat = t.value("eps_hat", tc.eps_hat);
    tc.log_every = t.value("log_every", tc.log_every);
    tc.checkpoint_every = t.value("checkpoint_every", tc.checkpoint_every);
    tc.nonfinite_abort_limit =
        t.value("nonfinite_abort_limit", tc.nonfinite_abort_limit);
    tc.chunk_rows = t.value("chunk_rows", tc.chunk_rows);
  }
  cfg.train.validate();
  return cfg;
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("io: cannot open " + path);
  }
  return json::parse(in);
}

}  // namespace eptpinn::io
