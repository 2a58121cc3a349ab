#pragma once

#include <Eigen/Core>
#include <json.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "emissionscope/forest.hpp"
#include "emissionscope/linear.hpp"
#include "emissionscope/mlp.hpp"
#include "emissionscope/tree.hpp"

namespace emissionscope {

enum class Family { Mlp, Tree, Forest, Linear };

/// CLI token: "mlp", "dtr", "rf", "lr".
std::string_view family_token(Family family) noexcept;
/// Column label in comparison tables: "NN", "DTR", "RF", "Linear Regression".
std::string_view family_label(Family family) noexcept;
std::optional<Family> parse_family(std::string_view text) noexcept;

struct LinearConfig {
  std::string describe() const { return "ols"; }
};

using ModelConfig = std::variant<LinearConfig, MlpConfig, TreeConfig, ForestConfig>;
using Model = std::variant<LinearModel, MlpModel, TreeModel, ForestModel>;

Family family_of(const ModelConfig& cfg) noexcept;
Family family_of(const Model& model) noexcept;
std::string describe(const ModelConfig& cfg);

/// Fits whichever family `cfg` selects. `threads` applies to forests only.
Model fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const ModelConfig& cfg,
          std::size_t threads = 0);
Eigen::VectorXd predict(const Model& model, const Eigen::MatrixXd& X);

inline constexpr int kModelFormatVersion = 1;

/// Versioned document: format tag, kind, config echo and parameters. Doubles
/// round-trip exactly, so a loaded model predicts bit-identically.
nlohmann::json model_to_json(const Model& model);
Model model_from_json(const nlohmann::json& doc);

nlohmann::json config_to_json(const ModelConfig& cfg);
ModelConfig config_from_json(Family family, const nlohmann::json& j);

}  // namespace emissionscope
