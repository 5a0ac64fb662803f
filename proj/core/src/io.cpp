#include "rbm/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rbm/errors.hpp"

namespace rbm {

namespace {

using nlohmann::json;

double number(const json& j, const char* what) {
  if (!j.is_number()) throw InvalidParams(std::string("expected a number for ") + what);
  return j.get<double>();
}

Eigen::Matrix2d matrix(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_array() || !j[1].is_array() || j[0].size() != 2 ||
      j[1].size() != 2) {
    throw InvalidParams(std::string(what) + " must be a 2x2 array of rows");
  }
  Eigen::Matrix2d m;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) m(r, c) = number(j[r][c], what);
  }
  return m;
}

Eigen::Vector2d vector2(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2) throw InvalidParams(std::string(what) + " must be a pair");
  return {number(j[0], what), number(j[1], what)};
}

}  // namespace

ParamsFile parse_params_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidParams(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw InvalidParams("parameter file must hold a JSON object");
  for (const char* key : {"sigma", "mu"}) {
    if (!j.contains(key)) throw InvalidParams(std::string("missing key ") + key);
  }
  const Eigen::Matrix2d sigma = matrix(j["sigma"], "sigma");
  if (std::abs(sigma(0, 1) - sigma(1, 0)) > 1e-12 * sigma.cwiseAbs().maxCoeff()) {
    throw InvalidParams("sigma must be symmetric");
  }
  const Eigen::Vector2d mu = vector2(j["mu"], "mu");
  ParamsFile out;
  if (j.contains("beta")) {
    WedgeParams w;
    w.beta = number(j["beta"], "beta");
    w.sigma = sigma;
    w.mu = mu;
    const bool has_angles = j.contains("delta") && j.contains("epsilon");
    if (j.contains("R")) {
      w.reflection = matrix(j["R"], "R");
      if (has_angles) {
        const WedgeAngles a = wedge_angles(w);
        if (std::abs(a.delta - number(j["delta"], "delta")) > 1e-9 ||
            std::abs(a.epsilon - number(j["epsilon"], "epsilon")) > 1e-9) {
          throw InvalidParams("wedge angles disagree with the wedge reflection matrix");
        }
      }
    } else if (has_angles) {
      if (!sigma.isApprox(Eigen::Matrix2d::Identity(), 1e-12)) {
        throw InvalidParams("building R from angles requires an identity wedge covariance");
      }
      w.reflection = wedge_from_angles(w.beta, number(j["delta"], "delta"),
                                       number(j["epsilon"], "epsilon"), mu)
                         .reflection;
    } else {
      throw InvalidParams("wedge file needs R or the angles delta and epsilon");
    }
    out.params = wedge_to_quadrant(w);
    out.wedge = w;
  } else {
    if (!j.contains("R")) throw InvalidParams("missing key R");
    out.params = ModelParams::from_matrices(sigma, mu, matrix(j["R"], "R"));
  }
  validate(out.params);  // rejects non-finite entries
  return out;
}

ParamsFile load_params_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParams("cannot open parameter file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_params_json(ss.str());
}

std::string params_to_json(const ModelParams& p) {
  json j;
  j["sigma"] = {{p.sigma11, p.sigma12}, {p.sigma12, p.sigma22}};
  j["mu"] = {p.mu1, p.mu2};
  j["R"] = {{p.r11, p.r12}, {p.r21, p.r22}};
  return j.dump();
}

}  // namespace rbm
