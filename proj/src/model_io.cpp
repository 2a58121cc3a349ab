#include "emissionscope/model.hpp"

#include "emissionscope/error.hpp"

namespace emissionscope {

using nlohmann::json;

std::string_view family_token(Family family) noexcept {
  switch (family) {
    case Family::Mlp: return "mlp";
    case Family::Tree: return "dtr";
    case Family::Forest: return "rf";
    case Family::Linear: return "lr";
  }
  return "?";
}

std::string_view family_label(Family family) noexcept {
  switch (family) {
    case Family::Mlp: return "NN";
    case Family::Tree: return "DTR";
    case Family::Forest: return "RF";
    case Family::Linear: return "Linear Regression";
  }
  return "?";
}

std::optional<Family> parse_family(std::string_view text) noexcept {
  for (Family f : {Family::Mlp, Family::Tree, Family::Forest, Family::Linear}) {
    if (text == family_token(f)) return f;
  }
  if (text == "nn") return Family::Mlp;
  if (text == "tree") return Family::Tree;
  if (text == "forest") return Family::Forest;
  if (text == "linear") return Family::Linear;
  return std::nullopt;
}

Family family_of(const ModelConfig& cfg) noexcept {
  return std::visit(
      [](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, LinearConfig>) return Family::Linear;
        else if constexpr (std::is_same_v<T, MlpConfig>) return Family::Mlp;
        else if constexpr (std::is_same_v<T, TreeConfig>) return Family::Tree;
        else return Family::Forest;
      },
      cfg);
}

Family family_of(const Model& model) noexcept {
  return std::visit(
      [](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LinearModel>) return Family::Linear;
        else if constexpr (std::is_same_v<T, MlpModel>) return Family::Mlp;
        else if constexpr (std::is_same_v<T, TreeModel>) return Family::Tree;
        else return Family::Forest;
      },
      model);
}

std::string describe(const ModelConfig& cfg) {
  return std::visit([](const auto& c) { return c.describe(); }, cfg);
}

Model fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const ModelConfig& cfg,
          std::size_t threads) {
  return std::visit(
      [&](const auto& c) -> Model {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, LinearConfig>) return fit_linear(X, y);
        else if constexpr (std::is_same_v<T, MlpConfig>) return fit_mlp(X, y, c);
        else if constexpr (std::is_same_v<T, TreeConfig>) return fit_tree(X, y, c);
        else return fit_forest(X, y, c, threads);
      },
      cfg);
}

Eigen::VectorXd predict(const Model& model, const Eigen::MatrixXd& X) {
  return std::visit(
      [&](const auto& m) -> Eigen::VectorXd {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LinearModel>) return predict_linear(m, X);
        else if constexpr (std::is_same_v<T, MlpModel>) return predict_mlp(m, X);
        else if constexpr (std::is_same_v<T, TreeModel>) return predict_tree(m, X);
        else return predict_forest(m, X);
      },
      model);
}

namespace {

json vec_to_json(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Eigen::VectorXd vec_from_json(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

// Row-major nested arrays.
json mat_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(vec_to_json(m.row(r).transpose()));
  return rows;
}

Eigen::MatrixXd mat_from_json(const json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = rows ? static_cast<Eigen::Index>(j[0].size()) : 0;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw Error(Errc::DimensionMismatch, "ragged weight matrix");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

json tree_config_json(const TreeConfig& c) {
  json j{{"min_leaf_size", c.min_leaf_size},
         {"min_parent_size", c.min_parent_size},
         {"seed", c.seed}};
  j["max_splits"] = c.max_splits ? json(*c.max_splits) : json(nullptr);
  return j;
}

TreeConfig tree_config_from(const json& j) {
  TreeConfig c;
  c.min_leaf_size = j.at("min_leaf_size").get<std::size_t>();
  c.min_parent_size = j.at("min_parent_size").get<std::size_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  if (!j.at("max_splits").is_null()) c.max_splits = j.at("max_splits").get<std::size_t>();
  return c;
}

json mlp_config_json(const MlpConfig& c) {
  return {{"hidden_layers", c.hidden_layers},
          {"learning_rate", c.learning_rate},
          {"epochs", c.epochs},
          {"seed", c.seed},
          {"normalize_inputs", c.normalize_inputs}};
}

MlpConfig mlp_config_from(const json& j) {
  MlpConfig c;
  c.hidden_layers = j.at("hidden_layers").get<std::vector<std::size_t>>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.epochs = j.at("epochs").get<std::size_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.normalize_inputs = j.at("normalize_inputs").get<bool>();
  return c;
}

json forest_config_json(const ForestConfig& c) {
  json j{{"n_trees", c.n_trees},
         {"tree", tree_config_json(c.tree)},
         {"bootstrap", c.bootstrap},
         {"seed", c.seed}};
  j["mtry"] = c.mtry ? json(*c.mtry) : json(nullptr);
  return j;
}

ForestConfig forest_config_from(const json& j) {
  ForestConfig c;
  c.n_trees = j.at("n_trees").get<std::size_t>();
  c.tree = tree_config_from(j.at("tree"));
  c.bootstrap = j.at("bootstrap").get<bool>();
  c.seed = j.at("seed").get<std::uint64_t>();
  if (!j.at("mtry").is_null()) c.mtry = j.at("mtry").get<std::size_t>();
  return c;
}

json tree_params(const TreeModel& t) {
  json nodes = json::array();
  for (const TreeNode& n : t.nodes) {
    if (n.is_leaf()) {
      nodes.push_back({{"leaf", true}, {"value", n.value}, {"count", n.count}});
    } else {
      nodes.push_back({{"leaf", false},
                       {"feature", n.feature},
                       {"threshold", n.threshold},
                       {"value", n.value},
                       {"count", n.count}});
    }
  }
  return {{"input_dim", t.input_dim}, {"config", tree_config_json(t.config)}, {"nodes", nodes}};
}

// Rebuilds right-child links from the preorder list; returns one past the
// subtree rooted at `i`.
std::size_t link_preorder(std::vector<TreeNode>& nodes, std::size_t i) {
  if (i >= nodes.size()) throw Error(Errc::DimensionMismatch, "truncated preorder tree");
  if (nodes[i].is_leaf()) return i + 1;
  const std::size_t right = link_preorder(nodes, i + 1);
  nodes[i].right = right;
  return link_preorder(nodes, right);
}

TreeModel tree_from(const json& j) {
  TreeModel t;
  t.input_dim = j.at("input_dim").get<std::size_t>();
  t.config = tree_config_from(j.at("config"));
  for (const json& n : j.at("nodes")) {
    TreeNode node;
    node.value = n.at("value").get<double>();
    node.count = n.at("count").get<std::size_t>();
    if (!n.at("leaf").get<bool>()) {
      node.feature = n.at("feature").get<int>();
      node.threshold = n.at("threshold").get<double>();
      if (node.feature < 0 || static_cast<std::size_t>(node.feature) >= t.input_dim) {
        throw Error(Errc::DimensionMismatch, "split feature out of range");
      }
    }
    t.nodes.push_back(node);
  }
  if (link_preorder(t.nodes, 0) != t.nodes.size()) {
    throw Error(Errc::DimensionMismatch, "preorder tree has trailing nodes");
  }
  return t;
}

}  // namespace

json config_to_json(const ModelConfig& cfg) {
  return std::visit(
      [](const auto& c) -> json {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, LinearConfig>) return json::object();
        else if constexpr (std::is_same_v<T, MlpConfig>) return mlp_config_json(c);
        else if constexpr (std::is_same_v<T, TreeConfig>) return tree_config_json(c);
        else return forest_config_json(c);
      },
      cfg);
}

ModelConfig config_from_json(Family family, const json& j) {
  try {
    switch (family) {
      case Family::Linear: return LinearConfig{};
      case Family::Mlp: return mlp_config_from(j);
      case Family::Tree: return tree_config_from(j);
      case Family::Forest: return forest_config_from(j);
    }
  } catch (const json::exception& e) {
    throw Error(Errc::MalformedHeader, std::string("model config: ") + e.what());
  }
  return LinearConfig{};
}

json model_to_json(const Model& model) {
  json doc{{"format", "emissionscope-model"},
           {"version", kModelFormatVersion},
           {"kind", family_token(family_of(model))}};
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LinearModel>) {
          doc["config"] = json::object();
          doc["params"] = {{"weights", vec_to_json(m.weights)}, {"intercept", m.intercept}};
        } else if constexpr (std::is_same_v<T, MlpModel>) {
          doc["config"] = mlp_config_json(m.config);
          json layers = json::array();
          for (const DenseLayer& l : m.layers) {
            layers.push_back({{"weights", mat_to_json(l.weights)}, {"bias", vec_to_json(l.bias)}});
          }
          doc["params"] = {{"input_min", vec_to_json(m.input_min)},
                           {"input_max", vec_to_json(m.input_max)},
                           {"layers", layers}};
        } else if constexpr (std::is_same_v<T, TreeModel>) {
          doc["config"] = tree_config_json(m.config);
          doc["params"] = tree_params(m);
        } else {
          doc["config"] = forest_config_json(m.config);
          json trees = json::array();
          for (const TreeModel& t : m.trees) trees.push_back(tree_params(t));
          doc["params"] = {{"master_seed", m.config.seed}, {"trees", trees}};
        }
      },
      model);
  return doc;
}

Model model_from_json(const json& doc) {
  try {
    if (doc.at("format") != "emissionscope-model") {
      throw Error(Errc::MalformedHeader, "not a model document");
    }
    if (doc.at("version").get<int>() != kModelFormatVersion) {
      throw Error(Errc::MalformedHeader, "unsupported model version " + doc.at("version").dump());
    }
    const auto family = parse_family(doc.at("kind").get<std::string>());
    if (!family) throw Error(Errc::MalformedHeader, "unknown model kind");
    const json& params = doc.at("params");
    switch (*family) {
      case Family::Linear: {
        LinearModel m;
        m.weights = vec_from_json(params.at("weights"));
        m.intercept = params.at("intercept").get<double>();
        return m;
      }
      case Family::Mlp: {
        MlpModel m;
        m.config = mlp_config_from(doc.at("config"));
        m.input_min = vec_from_json(params.at("input_min"));
        m.input_max = vec_from_json(params.at("input_max"));
        Eigen::Index prev = m.input_min.size();
        for (const json& l : params.at("layers")) {
          DenseLayer layer{mat_from_json(l.at("weights")), vec_from_json(l.at("bias"))};
          if (layer.weights.cols() != prev || layer.bias.size() != layer.weights.rows()) {
            throw Error(Errc::DimensionMismatch, "layer shapes do not chain");
          }
          prev = layer.weights.rows();
          m.layers.push_back(std::move(layer));
        }
        if (m.layers.empty() || prev != 1) {
          throw Error(Errc::DimensionMismatch, "network must end in a single output node");
        }
        return m;
      }
      case Family::Tree:
        return tree_from(params);
      case Family::Forest: {
        ForestModel m;
        m.config = forest_config_from(doc.at("config"));
        for (const json& t : params.at("trees")) m.trees.push_back(tree_from(t));
        if (m.trees.size() != m.config.n_trees) {
          throw Error(Errc::DimensionMismatch, "tree count differs from n_trees");
        }
        return m;
      }
    }
  } catch (const json::exception& e) {
    throw Error(Errc::MalformedHeader, std::string("model document: ") + e.what());
  }
  throw Error(Errc::MalformedHeader, "unreachable model kind");
}

}  // namespace emissionscope
