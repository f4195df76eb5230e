#include "core/config.hpp"

#include "core/io.hpp"

namespace otoclab {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::string& where,
                  const std::vector<std::string>& known) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(known.begin(), known.end(), it.key()) == known.end())
      throw config_error("unknown key '" + it.key() + "' in " + where);
  }
}

template <typename T>
T get_or(const json& obj, const std::string& key, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw config_error("bad type for key '" + key + "'");
  }
}

}  // namespace

Lattice RunConfig::make_lattice() const {
  if (!has_lattice) throw config_error("configuration has no lattice block");
  return Lattice(dimension, extents, boundary);
}

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw config_error(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw config_error("config root must be an object");
  require_keys(j, "config root",
               {"schema_version", "seed", "workers", "output", "lattice", "model", "experiment"});

  RunConfig cfg;
  cfg.raw = j;
  cfg.schema_version = get_or<int>(j, "schema_version", 1);
  if (cfg.schema_version != 1)
    throw config_error("unsupported schema_version " + std::to_string(cfg.schema_version));
  cfg.seed = get_or<std::uint64_t>(j, "seed", 0);
  cfg.workers = get_or<int>(j, "workers", 1);
  if (cfg.workers < 1) throw config_error("workers must be at least 1");

  if (j.contains("output")) {
    const auto& out = j.at("output");
    require_keys(out, "output block", {"dir"});
    cfg.out_dir = get_or<std::string>(out, "dir", "out");
  }

  if (j.contains("lattice")) {
    const auto& lat = j.at("lattice");
    require_keys(lat, "lattice block", {"dimension", "extents", "boundary"});
    if (!lat.contains("extents") || !lat.at("extents").is_array() || lat.at("extents").empty())
      throw config_error("lattice block needs a non-empty extents array");
    cfg.extents = lat.at("extents").get<std::vector<int>>();
    cfg.dimension = get_or<int>(lat, "dimension", static_cast<int>(cfg.extents.size()));
    std::string bc = get_or<std::string>(lat, "boundary", "open");
    if (bc == "open") {
      cfg.boundary = Boundary::Open;
    } else if (bc == "periodic") {
      cfg.boundary = Boundary::Periodic;
    } else {
      throw config_error("boundary must be 'open' or 'periodic'");
    }
    cfg.has_lattice = true;
    // Validate construction eagerly so config errors surface before any work.
    try {
      cfg.make_lattice();
    } catch (const std::exception& e) {
      throw config_error(std::string("invalid lattice: ") + e.what());
    }
  }

  if (j.contains("model")) {
    const auto& mj = j.at("model");
    require_keys(mj, "model block",
                 {"preset", "coupling", "alpha", "fields", "terms"});
    ModelSpec spec;
    spec.preset = get_or<std::string>(mj, "preset", "ising");
    spec.coupling = get_or<double>(mj, "coupling", 1.0);
    spec.alpha = get_or<double>(mj, "alpha", 2.0);
    if (mj.contains("fields")) {
      const auto& f = mj.at("fields");
      require_keys(f, "fields block", {"x", "y", "z"});
      spec.fields.x = get_or<double>(f, "x", 0.0);
      spec.fields.y = get_or<double>(f, "y", 0.0);
      spec.fields.z = get_or<double>(f, "z", 0.0);
    }
    if (mj.contains("terms")) {
      for (const auto& tj : mj.at("terms")) {
        require_keys(tj, "explicit term", {"strings", "coeffs"});
        ModelSpec::ExplicitTerm et;
        et.strings = tj.at("strings").get<std::vector<std::string>>();
        et.coeffs = tj.at("coeffs").get<std::vector<double>>();
        spec.explicit_terms.push_back(std::move(et));
      }
      if (spec.preset != "explicit" && !spec.explicit_terms.empty())
        throw config_error("explicit terms require preset 'explicit'");
    }
    if (spec.preset == "explicit" && spec.explicit_terms.empty())
      throw config_error("preset 'explicit' needs a terms array");
    cfg.model = std::move(spec);
    cfg.has_model = true;
  }

  if (j.contains("experiment")) {
    const auto& ej = j.at("experiment");
    if (!ej.is_object()) throw config_error("experiment block must be an object");
    cfg.experiment = ej;
    cfg.command = get_or<std::string>(ej, "command", "");
    if (ej.contains("budgets")) {
      const auto& bj = ej.at("budgets");
      require_keys(bj, "budgets block", {"dense_cutoff", "string_budget", "graph_budget"});
      cfg.budgets.dense_cutoff = get_or<int>(bj, "dense_cutoff", kDefaultDenseCutoff);
      cfg.budgets.string_budget =
          get_or<std::size_t>(bj, "string_budget", cfg.budgets.string_budget);
      cfg.budgets.graph_budget = get_or<int>(bj, "graph_budget", 7);
    }
  }

  cfg.config_hash = fnv1a64_hex(cfg.raw.dump());
  return cfg;
}

RunConfig load_config(const std::string& path) {
  return parse_config(read_file(path));
}

}  // namespace otoclab
