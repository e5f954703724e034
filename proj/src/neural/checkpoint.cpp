#include "v2n/neural/checkpoint.hpp"

#include <fstream>
#include <stdexcept>

#include "v2n/errors.hpp"

namespace v2n::neural {

namespace {

nlohmann::json tensor_to_json(const Tensor2D& t) {
  std::vector<double> data(t.data(), t.data() + t.size());
  return {{"rows", t.rows()}, {"cols", t.cols()}, {"data", std::move(data)}};
}

template <typename Params>
nlohmann::json params_to_json(const Params& params) {
  auto arr = nlohmann::json::array();
  for (const auto* p : params) arr.push_back(tensor_to_json(*p));
  return arr;
}

void load_params(const nlohmann::json& arr, const std::vector<Tensor2D*>& params) {
  if (!arr.is_array() || arr.size() != params.size()) {
    throw ShapeError("checkpoint holds " + std::to_string(arr.size()) +
                     " tensors, network expects " + std::to_string(params.size()));
  }
  for (std::size_t k = 0; k < params.size(); ++k) {
    const auto& t = arr[k];
    const auto rows = t.at("rows").get<Eigen::Index>();
    const auto cols = t.at("cols").get<Eigen::Index>();
    const auto data = t.at("data").get<std::vector<double>>();
    if (rows != params[k]->rows() || cols != params[k]->cols() ||
        static_cast<Eigen::Index>(data.size()) != rows * cols) {
      throw ShapeError("checkpoint tensor " + std::to_string(k) + " shape mismatch");
    }
    std::copy(data.begin(), data.end(), params[k]->data());
  }
}

}  // namespace

nlohmann::json to_json(const MlpSpec& spec) {
  return {{"input_dim", spec.input_dim},
          {"output_dim", spec.output_dim},
          {"hidden", spec.hidden},
          {"hidden_activation", to_string(spec.hidden_activation)},
          {"output_activation", to_string(spec.output_activation)}};
}

MlpSpec mlp_spec_from_json(const nlohmann::json& j) {
  MlpSpec s;
  s.input_dim = j.at("input_dim").get<int>();
  s.output_dim = j.at("output_dim").get<int>();
  s.hidden = j.at("hidden").get<std::vector<int>>();
  s.hidden_activation = activation_from_string(j.at("hidden_activation").get<std::string>());
  s.output_activation = activation_from_string(j.at("output_activation").get<std::string>());
  return s;
}

nlohmann::json to_json(const LstmSpec& spec) {
  return {{"input_dim", spec.input_dim},
          {"layers", spec.layers},
          {"cells_per_layer", spec.cells_per_layer},
          {"output_dim", spec.output_dim}};
}

LstmSpec lstm_spec_from_json(const nlohmann::json& j) {
  LstmSpec s;
  s.input_dim = j.at("input_dim").get<int>();
  s.layers = j.at("layers").get<int>();
  s.cells_per_layer = j.at("cells_per_layer").get<int>();
  s.output_dim = j.at("output_dim").get<int>();
  return s;
}

nlohmann::json to_json(const Mlp& net) {
  return {{"kind", "mlp"}, {"spec", to_json(net.spec())},
          {"parameters", params_to_json(net.parameters())}};
}

Mlp mlp_from_json(const nlohmann::json& j) {
  if (j.at("kind") != "mlp") throw std::invalid_argument("checkpoint is not an MLP");
  Mlp net(mlp_spec_from_json(j.at("spec")));
  load_params(j.at("parameters"), net.parameters());
  return net;
}

nlohmann::json to_json(const Lstm& net) {
  return {{"kind", "lstm"}, {"spec", to_json(net.spec())},
          {"parameters", params_to_json(net.parameters())}};
}

Lstm lstm_from_json(const nlohmann::json& j) {
  if (j.at("kind") != "lstm") throw std::invalid_argument("checkpoint is not an LSTM");
  Lstm net(lstm_spec_from_json(j.at("spec")));
  load_params(j.at("parameters"), net.parameters());
  return net;
}

void save_json(const std::filesystem::path& path, const nlohmann::json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump() << '\n';
}

nlohmann::json load_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return nlohmann::json::parse(in);
}

}  // namespace v2n::neural
