#pragma once

#include <optional>
#include <string>

#include "rbm/model.hpp"

namespace rbm {

// A parsed parameter file. Quadrant files carry sigma, mu and R. Wedge files
// also carry beta (and optionally delta/epsilon, which build R when it is
// missing); their quadrant equivalent is stored in params.
struct ParamsFile {
  ModelParams params;
  std::optional<WedgeParams> wedge;
};

// Throws InvalidParams on malformed input.
ParamsFile parse_params_json(const std::string& text);
ParamsFile load_params_file(const std::string& path);

std::string params_to_json(const ModelParams& params);

}  // namespace rbm
