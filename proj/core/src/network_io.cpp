#include <fstream>
#include <set>
#include <sstream>

#include "capnet/error.hpp"
#include "capnet/network.hpp"
#include "json.hpp"

namespace capnet {

namespace {

using json = nlohmann::ordered_json;

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(what + ": " + e.what());
  }
}

void reject_unknown_fields(const json& obj, const std::set<std::string>& allowed,
                           const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) {
      throw ParseError(where + ": unknown field \"" + key + "\"");
    }
  }
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing field \"" + key + "\"");
  return *it;
}

std::size_t positive_integer(const json& v, const std::string& where) {
  if (!v.is_number_unsigned() && !v.is_number_integer()) {
    throw ParseError(where + ": expected a positive integer");
  }
  const auto n = v.get<long long>();
  if (n <= 0) throw ParseError(where + ": expected a positive integer, got " + std::to_string(n));
  return static_cast<std::size_t>(n);
}

std::vector<double> number_array(const json& v, const std::string& where) {
  if (!v.is_array()) throw ParseError(where + ": expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!v[k].is_number()) {
      throw ParseError(where + "[" + std::to_string(k) + "]: expected a number");
    }
    out.push_back(v[k].get<double>());
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(path + ": cannot open file for writing");
  out << text;
  if (!out) throw ParseError(path + ": write failed");
}

}  // namespace

Network parse_network(const std::string& text) {
  const json root = parse_json(text, "network");
  if (!root.is_object()) throw ParseError("network: top level must be an object");
  reject_unknown_fields(root, {"input_dim", "layers"}, "network");
  const std::size_t input_dim = positive_integer(require(root, "input_dim", "network"),
                                                 "network.input_dim");
  const json& jl = require(root, "layers", "network");
  if (!jl.is_array() || jl.empty()) {
    throw ParseError("network.layers: expected a non-empty array");
  }

  std::vector<Layer> layers;
  for (std::size_t j = 0; j < jl.size(); ++j) {
    const std::string where = "network.layers[" + std::to_string(j) + "]";
    const json& obj = jl[j];
    if (!obj.is_object()) throw ParseError(where + ": expected an object");
    reject_unknown_fields(obj, {"rows", "cols", "data", "activation"}, where);
    const std::size_t rows = positive_integer(require(obj, "rows", where), where + ".rows");
    const std::size_t cols = positive_integer(require(obj, "cols", where), where + ".cols");
    std::vector<double> data = number_array(require(obj, "data", where), where + ".data");
    if (data.size() != rows * cols) {
      throw ParseError(where + ".data: expected " + std::to_string(rows * cols) +
                       " numbers (rows x cols), got " + std::to_string(data.size()));
    }
    Layer layer;
    try {
      layer.weight = Matrix(rows, cols, std::move(data));
    } catch (const Error& e) {
      throw ParseError(where + ".data: " + e.what());
    }
    const bool last = j + 1 == jl.size();
    if (const auto it = obj.find("activation"); it != obj.end()) {
      if (last) throw ParseError(where + ".activation: the final layer must omit the activation");
      if (!it->is_string()) throw ParseError(where + ".activation: expected a string");
      try {
        layer.activation = parse_activation(it->get<std::string>());
      } catch (const Error& e) {
        throw ParseError(where + ".activation: " + e.what());
      }
    } else if (!last) {
      throw ParseError(where + ": missing field \"activation\"");
    }
    layers.push_back(std::move(layer));
  }
  if (layers.front().weight.cols() != input_dim) {
    throw ParseError("network.input_dim: " + std::to_string(input_dim) +
                     " does not match layers[0].cols = " +
                     std::to_string(layers.front().weight.cols()));
  }
  try {
    return Network(std::move(layers));
  } catch (const ShapeError& e) {
    throw ShapeError(std::string("network: ") + e.what());
  }
}

std::string serialize_network(const Network& net) {
  json root;
  root["input_dim"] = net.input_dim();
  json layers = json::array();
  for (const Layer& l : net.layers()) {
    json obj;
    obj["rows"] = l.weight.rows();
    obj["cols"] = l.weight.cols();
    obj["data"] = std::vector<double>(l.weight.data().begin(), l.weight.data().end());
    if (l.activation) obj["activation"] = to_string(*l.activation);
    layers.push_back(std::move(obj));
  }
  root["layers"] = std::move(layers);
  return root.dump(2) + "\n";
}

Network load_network(const std::string& path) { return parse_network(read_file(path)); }

void save_network(const Network& net, const std::string& path) {
  write_file(path, serialize_network(net));
}

Dataset parse_dataset(const std::string& text) {
  const json root = parse_json(text, "dataset");
  if (!root.is_object()) throw ParseError("dataset: top level must be an object");
  reject_unknown_fields(root, {"points"}, "dataset");
  const json& jp = require(root, "points", "dataset");
  if (!jp.is_array() || jp.empty()) throw ParseError("dataset.points: expected a non-empty array");
  std::vector<Vector> points;
  points.reserve(jp.size());
  for (std::size_t i = 0; i < jp.size(); ++i) {
    points.push_back(number_array(jp[i], "dataset.points[" + std::to_string(i) + "]"));
  }
  try {
    return Dataset(std::move(points));
  } catch (const Error& e) {
    throw ParseError(std::string("dataset: ") + e.what());
  }
}

std::string serialize_dataset(const Dataset& data) {
  json root;
  json pts = json::array();
  for (const Vector& x : data.points) pts.push_back(x);
  root["points"] = std::move(pts);
  return root.dump(2) + "\n";
}

Dataset load_dataset(const std::string& path) { return parse_dataset(read_file(path)); }

void save_dataset(const Dataset& data, const std::string& path) {
  write_file(path, serialize_dataset(data));
}

}  // namespace capnet
