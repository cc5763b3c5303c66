#include "cyclophase/serialization.hpp"

#include <cstdio>

namespace cyclophase {

namespace {

void require(bool condition, const char* message) {
  if (!condition) throw InvalidInputError(message);
}

double number_at(const Json& j, const char* context) {
  if (!j.is_number()) throw InvalidInputError(context);
  return j.get<double>();
}

Eigen::MatrixXcd matrix_from_json(const Json& j, const char* context) {
  require(j.is_array() && !j.empty(), context);
  const Eigen::Index n_rows = static_cast<Eigen::Index>(j.size());
  require(j.at(0).is_array() && !j.at(0).empty(), context);
  const Eigen::Index n_cols = static_cast<Eigen::Index>(j.at(0).size());
  Eigen::MatrixXcd m(n_rows, n_cols);
  for (Eigen::Index r = 0; r < n_rows; ++r) {
    const Json& row = j.at(static_cast<std::size_t>(r));
    require(row.is_array() &&
                static_cast<Eigen::Index>(row.size()) == n_cols,
            context);
    for (Eigen::Index c = 0; c < n_cols; ++c)
      m(r, c) = complex_from_json(row.at(static_cast<std::size_t>(c)));
  }
  return m;
}

Json matrix_to_json(const Eigen::MatrixXcd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string format_double(double x) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", x);
  return buffer;
}

Json complex_to_json(const Complex& z) {
  return Json::array({z.real(), z.imag()});
}

Complex complex_from_json(const Json& j) {
  require(j.is_array() && j.size() == 2,
          "complex value must be a [re, im] pair");
  return Complex(number_at(j.at(0), "complex parts must be numbers"),
                 number_at(j.at(1), "complex parts must be numbers"));
}

Json pure_state_to_json(const PureState& psi) {
  Json amplitudes = Json::array();
  for (Eigen::Index k = 0; k < psi.dim(); ++k)
    amplitudes.push_back(complex_to_json(psi.amplitudes()[k]));
  return Json{{"amplitudes", std::move(amplitudes)}};
}

PureState pure_state_from_json(const Json& j) {
  require(j.is_object() && j.contains("amplitudes"),
          "pure state needs an \"amplitudes\" array");
  const Json& amps = j.at("amplitudes");
  require(amps.is_array() && !amps.empty(),
          "pure state needs an \"amplitudes\" array");
  Eigen::VectorXcd v(static_cast<Eigen::Index>(amps.size()));
  for (Eigen::Index k = 0; k < v.size(); ++k)
    v[k] = complex_from_json(amps.at(static_cast<std::size_t>(k)));
  return PureState(std::move(v));
}

Json mixed_state_to_json(const MixedState& rho) {
  return Json{{"density", matrix_to_json(rho.density())}};
}

MixedState mixed_state_from_json(const Json& j) {
  require(j.is_object() && j.contains("density"),
          "mixed state needs a \"density\" matrix");
  return MixedState(
      matrix_from_json(j.at("density"), "density must be a complex matrix"));
}

Json bloch_to_json(const BlochVector& v) {
  return Json::array({v[0], v[1], v[2]});
}

BlochVector bloch_from_json(const Json& j) {
  require(j.is_array() && j.size() == 3,
          "Bloch vector must be an [x, y, z] triple");
  return BlochVector(number_at(j.at(0), "Bloch components must be numbers"),
                     number_at(j.at(1), "Bloch components must be numbers"),
                     number_at(j.at(2), "Bloch components must be numbers"));
}

Json rows_to_json(const InterferometerRows& rows) {
  return Json{{"photons", rows.photons()},
              {"ports", rows.ports()},
              {"rows", matrix_to_json(rows.matrix())}};
}

InterferometerRows rows_from_json(const Json& j) {
  require(j.is_object() && j.contains("rows"),
          "interferometer needs a \"rows\" matrix");
  Eigen::MatrixXcd m =
      matrix_from_json(j.at("rows"), "rows must be a complex matrix");
  if (j.contains("photons"))
    require(j.at("photons").is_number_integer() &&
                j.at("photons").get<Eigen::Index>() == m.rows(),
            "\"photons\" disagrees with the row count");
  if (j.contains("ports"))
    require(j.at("ports").is_number_integer() &&
                j.at("ports").get<Eigen::Index>() == m.cols(),
            "\"ports\" disagrees with the column count");
  return InterferometerRows(std::move(m));
}

Json experiment_to_json(const ExperimentConfig& experiment) {
  Json states = Json::array();
  if (experiment.all_pure()) {
    for (const PureState& s : experiment.pure_states)
      states.push_back(pure_state_to_json(s));
  } else {
    for (const MixedState& s : experiment.mixed_states)
      states.push_back(mixed_state_to_json(s));
  }
  Json j{{"n", experiment.config.photons()},
         {"phases", experiment.config.phases()},
         {"states", std::move(states)}};
  if (experiment.partition)
    j["partition"] =
        Json::array({experiment.partition->alice, experiment.partition->bob});
  return j;
}

ExperimentConfig experiment_from_json(const Json& j) {
  require(j.is_object() && j.contains("n") && j.contains("phases") &&
              j.contains("states"),
          "experiment needs \"n\", \"phases\" and \"states\"");
  require(j.at("n").is_number_integer(), "\"n\" must be an integer");
  const int n = j.at("n").get<int>();
  const Json& phases_json = j.at("phases");
  require(phases_json.is_array(), "\"phases\" must be an array");
  std::vector<double> phases;
  phases.reserve(phases_json.size());
  for (const Json& p : phases_json)
    phases.push_back(number_at(p, "phases must be numbers"));

  ExperimentConfig experiment(CyclicConfig(n, std::move(phases)));

  const Json& states_json = j.at("states");
  require(states_json.is_array() &&
              static_cast<int>(states_json.size()) == n,
          "\"states\" must list one state per station");
  const bool all_pure = [&] {
    for (const Json& s : states_json)
      if (!(s.is_object() && s.contains("amplitudes"))) return false;
    return true;
  }();
  for (const Json& s : states_json) {
    require(s.is_object(), "states must be objects");
    require(s.contains("amplitudes") != s.contains("density"),
            "each state is either \"amplitudes\" or \"density\"");
    if (all_pure) {
      experiment.pure_states.push_back(pure_state_from_json(s));
    } else if (s.contains("amplitudes")) {
      const PureState psi = pure_state_from_json(s);
      experiment.mixed_states.push_back(
          MixedState(psi.amplitudes() * psi.amplitudes().adjoint()));
    } else {
      experiment.mixed_states.push_back(mixed_state_from_json(s));
    }
  }

  if (j.contains("partition")) {
    const Json& part = j.at("partition");
    require(part.is_array() && part.size() == 2,
            "\"partition\" must hold two station lists");
    StationPartition partition;
    for (int side = 0; side < 2; ++side) {
      const Json& list = part.at(static_cast<std::size_t>(side));
      require(list.is_array(), "partition sides must be arrays");
      auto& target = side == 0 ? partition.alice : partition.bob;
      for (const Json& station : list) {
        require(station.is_number_integer(),
                "partition entries must be station indices");
        target.push_back(station.get<int>());
      }
    }
    experiment.partition = std::move(partition);
  }
  return experiment;
}

std::string coincidence_csv(int n_stations,
                            const std::vector<double>& probabilities) {
  require(n_stations >= 1 && n_stations < 63,
          "station count out of range for pattern enumeration");
  require(probabilities.size() == (std::size_t{1} << n_stations),
          "need one probability per outcome pattern");
  std::string csv = "pattern,k,probability\n";
  for (std::size_t index = 0; index < probabilities.size(); ++index) {
    const OutcomePattern pattern =
        OutcomePattern::from_index(n_stations, index);
    for (int bit : pattern.bits()) csv += static_cast<char>('0' + bit);
    csv += ',';
    csv += std::to_string(pattern.weight());
    csv += ',';
    csv += format_double(probabilities[index]);
    csv += '\n';
  }
  return csv;
}

std::string port_distribution_csv(
    const std::vector<std::pair<OutputPortPattern, double>>& distribution) {
  std::string csv = "pattern,probability\n";
  for (const auto& [pattern, probability] : distribution) {
    const std::vector<int>& ports = pattern.sorted_ports();
    for (std::size_t k = 0; k < ports.size(); ++k) {
      if (k > 0) csv += '-';
      csv += std::to_string(ports[k]);
    }
    csv += ',';
    csv += format_double(probability);
    csv += '\n';
  }
  return csv;
}

std::string scan_csv(const std::vector<ScanRow>& rows) {
  std::string csv =
      "theta,d,re_v11,re_v12,re_v21,re_v22,phase_g11,phase_g12,phase_g21,"
      "phase_g22,i_chsh,i_zeno_limit\n";
  for (const ScanRow& row : rows) {
    csv += format_double(row.theta);
    csv += ',';
    csv += std::to_string(row.d);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        csv += ',';
        csv += format_double(row.report.v[static_cast<std::size_t>(i)]
                                         [static_cast<std::size_t>(j)]
                                             .real());
      }
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        csv += ',';
        csv += format_double(std::arg(row.report.v[static_cast<std::size_t>(
            i)][static_cast<std::size_t>(j)]));
      }
    csv += ',';
    csv += format_double(row.report.i_chsh);
    csv += ',';
    csv += format_double(row.zeno_limit);
    csv += '\n';
  }
  return csv;
}

std::string trajectories_csv(const std::vector<TrajectoryPoint>& points) {
  std::string csv = "trajectory,kind,t,bx,by,bz\n";
  for (const TrajectoryPoint& p : points) {
    csv += p.trajectory;
    csv += ',';
    csv += p.kind;
    csv += ',';
    csv += format_double(p.t);
    for (int k = 0; k < 3; ++k) {
      csv += ',';
      csv += format_double(p.point[k]);
    }
    csv += '\n';
  }
  return csv;
}

Json optimization_report_to_json(const OptimizationReport& report) {
  static const char* const names[6] = {"x1", "x2", "y1", "y2", "w1", "w2"};
  Json vectors;
  for (int k = 0; k < 6; ++k)
    vectors[names[k]] =
        bloch_to_json(report.vectors[static_cast<std::size_t>(k)]);
  return Json{{"best_value", report.best_value},
              {"vectors", std::move(vectors)},
              {"restarts", report.restarts},
              {"seed", report.seed}};
}

}  // namespace cyclophase
