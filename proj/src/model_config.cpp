#include "sdpd/model_config.hpp"

#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "sdpd/csv_io.hpp"
#include "sdpd/errors.hpp"
#include "sdpd/rng.hpp"

namespace sdpd {

namespace {

using nlohmann::json;

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "' for reading");
  try {
    return json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw DataError("'" + path + "': " + e.what());
  }
}

WKind parse_w_kind(const std::string& s) {
  if (s == "W1" || s == "w1") return WKind::w1;
  if (s == "W2" || s == "w2") return WKind::w2;
  if (s == "W3" || s == "w3") return WKind::w3;
  throw BadSpec("unknown spatial matrix kind '" + s + "'");
}

Normalization parse_normalization(const std::string& s) {
  if (s == "l1_row" || s == "l1") return Normalization::l1_row;
  if (s == "l2_row" || s == "l2") return Normalization::l2_row;
  if (s == "none") return Normalization::none;
  throw BadSpec("unknown normalization '" + s + "'");
}

CrossMode parse_cross_mode(const std::string& s) {
  if (s == "independent") return CrossMode::independent;
  if (s == "common_factor") return CrossMode::common_factor;
  throw BadSpec("unknown cross mode '" + s + "'");
}

EstimatorKind parse_estimator(const std::string& s) {
  if (s == "sdpd_known_w") return EstimatorKind::sdpd_known_w;
  if (s == "sdpd_estimated_w") return EstimatorKind::sdpd_estimated_w;
  if (s == "var_yule_walker" || s == "var") return EstimatorKind::var_yule_walker;
  throw BadSpec("unknown estimator '" + s + "'");
}

Eigen::VectorXd parse_vector(const json& j, const std::string& what) {
  if (!j.is_array()) throw BadSpec(what + " must be an array of numbers");
  Eigen::VectorXd v(j.size());
  Eigen::Index i = 0;
  for (const auto& x : j) {
    if (!x.is_number()) throw BadSpec(what + " must be an array of numbers");
    v(i++) = x.get<double>();
  }
  return v;
}

}  // namespace

ModelDescriptor read_model_descriptor(const std::string& path) {
  const json j = load_json(path);
  ModelDescriptor d;
  if (!j.contains("p")) throw BadSpec("'" + path + "': missing field 'p'");
  d.p = j.at("p").get<Eigen::Index>();
  d.T = j.value("T", d.T);
  d.burn_in = j.value("burn_in", d.burn_in);
  d.seed = j.value("seed", d.seed);

  if (j.contains("w")) {
    const json& w = j.at("w");
    if (w.contains("file")) {
      d.w_file = w.at("file").get<std::string>();
    } else if (w.contains("kind")) {
      d.w_kind = parse_w_kind(w.at("kind").get<std::string>());
    } else {
      throw BadSpec("'" + path + "': w needs either 'kind' or 'file'");
    }
    if (w.contains("normalization")) {
      d.normalization =
          parse_normalization(w.at("normalization").get<std::string>());
    }
    if (w.contains("seed")) d.w_seed = w.at("seed").get<std::uint64_t>();
  } else {
    d.w_kind = WKind::w1;
  }

  if (j.contains("coefficients")) {
    const json& c = j.at("coefficients");
    if (c.contains("lambda0") != c.contains("lambda1")) {
      throw BadSpec("'" + path +
                    "': give both lambda0 and lambda1 or neither");
    }
    if (c.contains("lambda0")) {
      d.lambda0 = parse_vector(c.at("lambda0"), "lambda0");
      d.lambda1 = parse_vector(c.at("lambda1"), "lambda1");
    }
    d.lambda_low = c.value("low", d.lambda_low);
    d.lambda_high = c.value("high", d.lambda_high);
    if (c.contains("seed")) d.lambda_seed = c.at("seed").get<std::uint64_t>();
  }

  if (j.contains("errors")) {
    const json& e = j.at("errors");
    if (e.contains("cross_mode")) {
      d.cross_mode = parse_cross_mode(e.at("cross_mode").get<std::string>());
    }
    if (e.contains("sigma")) {
      if (e.at("sigma").is_array()) {
        d.sigma = parse_vector(e.at("sigma"), "sigma");
      } else {
        const json& s = e.at("sigma");
        d.sigma_low = s.value("low", d.sigma_low);
        d.sigma_high = s.value("high", d.sigma_high);
        if (s.contains("seed")) d.sigma_seed = s.at("seed").get<std::uint64_t>();
      }
    }
    d.factor_loading = e.value("factor_loading", d.factor_loading);
    d.factor_index = e.value("factor_index", d.factor_index);
    if (e.contains("seed")) d.error_seed = e.at("seed").get<std::uint64_t>();
  }
  return d;
}

SdpdModel build_model(const ModelDescriptor& d) {
  if (d.p < 1) throw BadSpec("build_model(): p must be positive");

  SpatialWeightMatrix w;
  if (!d.w_file.empty()) {
    w = read_weights_csv(d.w_file);
    if (w.p() != d.p) {
      throw BadSpec("build_model(): stored W is " + std::to_string(w.p()) +
                    "x" + std::to_string(w.p()) + ", expected p = " +
                    std::to_string(d.p));
    }
  } else if (d.w_kind) {
    w = gen_spatial_matrix(*d.w_kind, d.p,
                           d.w_seed.value_or(derive_seed(d.seed, 0)),
                           d.normalization);
  } else {
    throw BadSpec("build_model(): no W source given");
  }

  Eigen::VectorXd lambda0, lambda1;
  if (d.lambda0) {
    lambda0 = *d.lambda0;
    lambda1 = *d.lambda1;
  } else {
    std::tie(lambda0, lambda1) = gen_coefficients(
        d.p, d.lambda_seed.value_or(derive_seed(d.seed, 1)), d.lambda_low,
        d.lambda_high, &w);
  }

  ErrorSpec spec;
  spec.sigma = d.sigma ? *d.sigma
                       : draw_uniform_vector(
                             d.p, d.sigma_seed.value_or(derive_seed(d.seed, 2)),
                             d.sigma_low, d.sigma_high);
  spec.cross_mode = d.cross_mode;
  spec.factor_loading = d.factor_loading;
  spec.factor_index = d.factor_index;
  spec.seed = d.error_seed.value_or(derive_seed(d.seed, 3));

  return SdpdModel(std::move(w), std::move(lambda0), std::move(lambda1),
                   std::move(spec));
}

McConfig read_mc_config(const std::string& path) {
  const json j = load_json(path);
  McConfig cfg;
  if (j.contains("w")) {
    const json& w = j.at("w");
    if (w.contains("file")) {
      cfg.w_file = w.at("file").get<std::string>();
      cfg.w_kind.reset();
    } else if (w.contains("kind")) {
      cfg.w_kind = parse_w_kind(w.at("kind").get<std::string>());
    } else {
      throw BadSpec("'" + path + "': w needs either 'kind' or 'file'");
    }
  }
  if (!j.contains("p") || !j.contains("T")) {
    throw BadSpec("'" + path + "': p and T are required");
  }
  cfg.p = j.at("p").get<Eigen::Index>();
  cfg.T = j.at("T").get<Eigen::Index>();
  cfg.replications = j.value("replications", cfg.replications);
  cfg.master_seed = j.value("master_seed", cfg.master_seed);
  cfg.burn_in = j.value("burn_in", cfg.burn_in);
  if (j.contains("normalization")) {
    cfg.normalization =
        parse_normalization(j.at("normalization").get<std::string>());
  }
  if (j.contains("lambda")) {
    const json& l = j.at("lambda");
    cfg.lambda_low = l.value("low", cfg.lambda_low);
    cfg.lambda_high = l.value("high", cfg.lambda_high);
    cfg.fixed_lambda = l.value("fixed", cfg.fixed_lambda);
  }
  if (j.contains("sigma")) {
    const json& s = j.at("sigma");
    cfg.sigma_low = s.value("low", cfg.sigma_low);
    cfg.sigma_high = s.value("high", cfg.sigma_high);
  }
  if (j.contains("errors")) {
    const json& e = j.at("errors");
    if (e.contains("cross_mode")) {
      cfg.cross_mode = parse_cross_mode(e.at("cross_mode").get<std::string>());
    }
    cfg.factor_loading = e.value("factor_loading", cfg.factor_loading);
    cfg.factor_index = e.value("factor_index", cfg.factor_index);
  }
  if (j.contains("estimators")) {
    cfg.estimators.clear();
    for (const auto& e : j.at("estimators")) {
      cfg.estimators.push_back(parse_estimator(e.get<std::string>()));
    }
  }
  cfg.threads = j.value("threads", cfg.threads);
  return cfg;
}

}  // namespace sdpd
