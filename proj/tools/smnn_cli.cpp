// Command-line front end: dataset generation, support subsampling, training,
// evaluation, prediction and explanation.
//
// Exit codes: 0 success, 1 usage error, 2 data or geometry error.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "smnn/datagen.hpp"
#include "smnn/error.hpp"
#include "smnn/evaluate.hpp"
#include "smnn/explain.hpp"
#include "smnn/model_io.hpp"
#include "smnn/sampling.hpp"
#include "smnn/training.hpp"

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

smnn::Vector parse_point(const std::string& text) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    double v = 0.0;
    const auto* first = cell.data();
    const auto* last = cell.data() + cell.size();
    while (first != last && *first == ' ') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) throw UsageError("--point: '" + cell + "' is not a number");
    values.push_back(v);
  }
  if (values.empty()) throw UsageError("--point: no coordinates given");
  return Eigen::Map<smnn::Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

json vec_json(const smnn::Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw smnn::Error(smnn::ErrorKind::IoError, "cannot write '" + path + "'");
  out << text;
}

std::vector<std::size_t> read_support(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw smnn::Error(smnn::ErrorKind::IoError, "cannot open '" + path + "'");
  try {
    return json::parse(in).get<std::vector<std::size_t>>();
  } catch (const json::exception& e) {
    throw smnn::Error(smnn::ErrorKind::ParseError, "support file '" + path + "': " + e.what());
  }
}

// Shared support-selection flags of `subsample` and `train`.
struct SupportFlags {
  std::optional<double> epsilon;
  std::optional<double> kappa;
  std::optional<std::size_t> size;

  void add_to(CLI::App* cmd) {
    auto* e = cmd->add_option("--epsilon", epsilon, "cover radius of the epsilon-representative support");
    auto* k = cmd->add_option("--kappa", kappa, "epsilon = (max centered norm + 1/2) / kappa");
    auto* s = cmd->add_option("--size", size, "pick epsilon so the support has exactly this many points");
    e->excludes(k)->excludes(s);
    k->excludes(s);
  }
  bool any() const { return epsilon || kappa || size; }

  // Returns the support rows and records the sampler in `prov`.
  std::vector<std::size_t> select(const smnn::PointCloud& points, std::uint64_t seed,
                                  smnn::Provenance* prov) const {
    double eps = 0.0;
    std::string mode;
    double parameter = 0.0;
    if (kappa) {
      smnn::SamplerConfig cfg{smnn::SamplerConfig::Mode::Kappa, 0.0, *kappa, seed};
      eps = cfg.resolve_epsilon(points);
      mode = "kappa";
      parameter = *kappa;
    } else if (size) {
      eps = smnn::epsilon_for_size(points, *size, seed);
      mode = "size";
      parameter = static_cast<double>(*size);
    } else {
      eps = *epsilon;
      mode = "epsilon";
      parameter = *epsilon;
    }
    if (prov) {
      prov->sampler = mode;
      prov->sampler_parameter = parameter;
      prov->epsilon = eps;
    }
    return smnn::epsilon_representative(points, eps, seed);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simplicial map neural networks: train, evaluate and explain"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a synthetic dataset as CSV");
  std::string gen_kind = "spiral", gen_out, gen_test_out;
  std::uint64_t gen_seed = 0;
  double gen_train_fraction = 0.75;
  smnn::SpiralOptions spiral;
  smnn::ClusterOptions clusters;
  std::size_t gen_n = 0;
  gen->add_option("--kind", gen_kind, "spiral | clusters")->check(CLI::IsMember({"spiral", "clusters"}));
  gen->add_option("--n", gen_n, "number of samples");
  gen->add_option("--seed", gen_seed);
  gen->add_option("--out", gen_out, "output CSV (train side when --test-out is given)")->required();
  gen->add_option("--test-out", gen_test_out, "also split and write the test side here");
  gen->add_option("--train-fraction", gen_train_fraction);
  gen->add_option("--noise", spiral.noise_sd, "spiral noise standard deviation");
  gen->add_option("--turns", spiral.turns, "spiral turns");
  gen->add_option("--features", clusters.n_features, "cluster feature count");
  gen->add_option("--clusters-per-class", clusters.clusters_per_class);
  gen->add_option("--class-sep", clusters.class_sep);
  gen->add_option("--flip", clusters.flip_fraction, "fraction of labels flipped");

  // split
  auto* split_cmd = app.add_subcommand("split", "stratified train/test split of a CSV");
  std::string split_in, split_train, split_test;
  double split_fraction = 0.75;
  std::uint64_t split_seed = 0;
  split_cmd->add_option("--in", split_in)->required();
  split_cmd->add_option("--train-fraction", split_fraction);
  split_cmd->add_option("--seed", split_seed);
  split_cmd->add_option("--train-out", split_train)->required();
  split_cmd->add_option("--test-out", split_test)->required();

  // subsample
  auto* sub = app.add_subcommand("subsample", "select an epsilon-representative support set");
  std::string sub_in, sub_out;
  std::uint64_t sub_seed = 0;
  SupportFlags sub_flags;
  sub->add_option("--in", sub_in)->required();
  sub->add_option("--out", sub_out, "JSON array of row indices")->required();
  sub->add_option("--seed", sub_seed);
  sub_flags.add_to(sub);

  // train
  auto* tr = app.add_subcommand("train", "train a model");
  std::string tr_data, tr_support, tr_out, tr_init = "uniform01";
  SupportFlags tr_flags;
  smnn::TrainConfig cfg;
  bool no_shuffle = false;
  tr->add_option("--data", tr_data)->required();
  auto* support_opt = tr->add_option("--support", tr_support, "JSON array of support rows (default: all rows)");
  tr_flags.add_to(tr);
  tr->add_option("--epochs", cfg.epochs)->check(CLI::PositiveNumber);
  tr->add_option("--lr", cfg.learning_rate)->check(CLI::PositiveNumber);
  tr->add_option("--init", tr_init)->check(CLI::IsMember({"uniform01", "one_hot"}));
  tr->add_option("--seed", cfg.seed);
  tr->add_option("--radius-margin", cfg.radius_margin)->check(CLI::PositiveNumber);
  tr->add_flag("--no-shuffle", no_shuffle, "visit samples in file order");
  tr->add_option("--out", tr_out)->required();
  for (const char* name : {"--epsilon", "--kappa", "--size"}) support_opt->excludes(tr->get_option(name));

  // eval
  auto* ev = app.add_subcommand("eval", "evaluate a model on a labelled CSV");
  std::string ev_model, ev_data;
  ev->add_option("--model", ev_model)->required();
  ev->add_option("--data", ev_data)->required();

  // predict
  auto* pr = app.add_subcommand("predict", "predict labels");
  std::string pr_model, pr_point, pr_data;
  pr->add_option("--model", pr_model)->required();
  auto* pr_point_opt = pr->add_option("--point", pr_point, "comma-separated coordinates");
  auto* pr_data_opt = pr->add_option("--data", pr_data, "CSV whose rows are predicted");
  pr_point_opt->excludes(pr_data_opt);

  // explain
  auto* ex = app.add_subcommand("explain", "explain one prediction");
  std::string ex_model, ex_point, ex_svg;
  ex->add_option("--model", ex_model)->required();
  ex->add_option("--point", ex_point, "comma-separated coordinates")->required();
  ex->add_option("--svg", ex_svg, "write a contribution bar chart");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*gen) {
      smnn::LabeledDataset data;
      if (gen_kind == "spiral") {
        spiral.seed = gen_seed;
        if (gen_n) spiral.n_samples = gen_n;
        data = smnn::gen_spiral(spiral);
      } else {
        clusters.seed = gen_seed;
        if (gen_n) clusters.n_samples = gen_n;
        data = smnn::gen_clusters(clusters);
      }
      if (gen_test_out.empty()) {
        smnn::save_csv(data, gen_out);
      } else {
        auto [train_side, test_side] = smnn::split(data, gen_train_fraction, gen_seed);
        smnn::save_csv(train_side, gen_out);
        smnn::save_csv(test_side, gen_test_out);
      }
    } else if (*split_cmd) {
      auto [train_side, test_side] = smnn::split(smnn::load_csv(split_in), split_fraction, split_seed);
      smnn::save_csv(train_side, split_train);
      smnn::save_csv(test_side, split_test);
    } else if (*sub) {
      if (!sub_flags.any()) throw UsageError("subsample: one of --epsilon, --kappa, --size is required");
      const auto data = smnn::load_csv(sub_in);
      write_text(sub_out, json(sub_flags.select(data.points, sub_seed, nullptr)).dump() + "\n");
    } else if (*tr) {
      cfg.init_mode = smnn::parse_init_mode(tr_init);
      cfg.shuffle = !no_shuffle;
      const auto data = smnn::load_csv(tr_data);
      smnn::Provenance prov;
      std::vector<std::size_t> support;
      if (!tr_support.empty()) {
        support = read_support(tr_support);
        prov.sampler = "file";
      } else if (tr_flags.any()) {
        support = tr_flags.select(data.points, cfg.seed, &prov);
      } else {
        support.resize(data.size());
        std::iota(support.begin(), support.end(), std::size_t{0});
      }
      auto result = smnn::train(data, support, cfg);
      auto& p = result.model.mutable_provenance();
      p.sampler = prov.sampler;
      p.sampler_parameter = prov.sampler_parameter;
      p.epsilon = prov.epsilon;
      smnn::save_model(result.model, tr_out);
      const auto& last = result.report.epochs.back();
      std::cout << json{{"support_size", result.model.support_size()},
                        {"simplices", result.model.space().triangulation().maximal().size()},
                        {"radius", result.model.space().radius()},
                        {"epochs", cfg.epochs},
                        {"final_train_loss", last.mean_loss},
                        {"final_train_accuracy", last.accuracy},
                        {"wall_seconds", result.report.wall_seconds}}
                       .dump(1)
                << "\n";
    } else if (*ev) {
      const auto model = smnn::load_model(ev_model);
      std::cout << smnn::to_json(smnn::evaluate(model, smnn::load_csv(ev_data))).dump(1) << "\n";
    } else if (*pr) {
      const auto model = smnn::load_model(pr_model);
      const auto one = [&](const smnn::Vector& x) {
        const smnn::Vector s = model.forward(x);
        return json{{"label", model.encoding().name(smnn::argmax(s))}, {"probabilities", vec_json(s)}};
      };
      if (!pr_point.empty()) {
        std::cout << one(parse_point(pr_point)).dump(1) << "\n";
      } else if (!pr_data.empty()) {
        const auto data = smnn::load_csv(pr_data);
        json rows = json::array();
        for (const auto& x : data.points.points()) rows.push_back(one(x));
        std::cout << rows.dump(1) << "\n";
      } else {
        throw UsageError("predict: one of --point, --data is required");
      }
    } else if (*ex) {
      const auto model = smnn::load_model(ex_model);
      const auto explanation = smnn::explain(model, parse_point(ex_point));
      std::cout << smnn::to_json(explanation).dump(1) << "\n";
      if (!ex_svg.empty())
        write_text(ex_svg, smnn::render_explanation_svg(explanation, model.encoding().names()));
    }
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const smnn::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
