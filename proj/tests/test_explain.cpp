#include <doctest.h>

#include <numeric>
#include <regex>

#include "oracles.hpp"
#include "smnn/datagen.hpp"
#include "smnn/explain.hpp"
#include "smnn/training.hpp"

using namespace smnn;
using fixture::vec;

namespace {

std::size_t count_bars(const std::string& svg) {
  std::size_t n = 0;
  for (auto pos = svg.find("class=\"bar\""); pos != std::string::npos; pos = svg.find("class=\"bar\"", pos + 1)) ++n;
  return n;
}

std::vector<std::size_t> iota_rows(std::size_t m) {
  std::vector<std::size_t> r(m);
  std::iota(r.begin(), r.end(), std::size_t{0});
  return r;
}

SmnnModel trained_spiral() {
  SpiralOptions o;
  o.n_samples = 80;
  o.seed = 2;
  TrainConfig c;
  c.epochs = 50;
  c.seed = 2;
  const auto data = gen_spiral(o);
  return train(data, iota_rows(data.size()), c).model;
}

void check_decomposition(const SmnnModel& model, const Explanation& e) {
  Vector z = Vector::Zero(static_cast<Eigen::Index>(model.num_classes()));
  for (const auto& c : e.contributors) {
    z += c.contributions;
    CHECK(c.xi_value > 0.0);
  }
  const Vector expected = model.logits(xi(model.space(), e.query));
  CHECK((z - expected).cwiseAbs().maxCoeff() < 1e-9);
  CHECK((softmax(z) - model.forward(e.query)).cwiseAbs().maxCoeff() < 1e-9);
  CHECK(e.contributors.size() <= model.space().dim() + 1);
}

}  // namespace

TEST_CASE("property: contributions decompose the logits") {
  const auto model = trained_spiral();
  std::mt19937_64 rng(12);
  for (int q = 0; q < 200; ++q) {
    const Vector x = model.space().untranslate(oracle::random_point(rng, 2, -1.0, 1.0));
    const auto e = explain(model, x);
    check_decomposition(model, e);
    CHECK(e.predicted_label == model.predict(x));
    if (!e.out_of_hull) CHECK(e.sphere_mass == 0.0);
  }
}

TEST_CASE("one_hot model explains a support point by itself") {
  const auto data = fixture::square();
  const std::vector<std::size_t> sl{0, 0, 1, 1};
  auto space = fit_space(data.points, iota_rows(4));
  const SmnnModel model(std::move(space), LabelEncoding({"0", "1"}),
                        init_weights(InitMode::OneHot, 0, 2, 4, sl), sl);
  for (std::size_t t = 0; t < 4; ++t) {
    const auto e = explain(model, data.points[t]);
    REQUIRE(e.contributors.size() == 1);
    CHECK(e.contributors[0].support_index == t);
    CHECK(e.contributors[0].contributions == model.encoding().one_hot(sl[t]));
    CHECK(e.contributors[0].coordinates == data.points[t]);
    CHECK(e.contributors[0].label == data.labels[t]);
  }
}

TEST_CASE("equidistant contributors with different columns contribute differently") {
  const auto data = fixture::square();
  const std::vector<std::size_t> sl{0, 0, 1, 1};
  auto space = fit_space(data.points, iota_rows(4));
  Matrix w(2, 4);
  w << 2.0, 0.5, 0.1, 0.0, 0.0, 0.1, 0.9, 3.0;
  const SmnnModel model(std::move(space), LabelEncoding({"0", "1"}), w, sl);
  // Midpoint of the shared diagonal: equal weight on u1 and u2.
  const auto e = explain(model, vec({0.75, 0.75}));
  REQUIRE(e.contributors.size() == 2);
  CHECK(e.contributors[0].xi_value == doctest::Approx(e.contributors[1].xi_value));
  CHECK(e.contributors[0].contributions != e.contributors[1].contributions);
}

TEST_CASE("out-of-hull explanations surface the sphere mass") {
  const auto data = fixture::square();
  const std::vector<std::size_t> sl{0, 0, 1, 1};
  auto space = fit_space_with_radius(data.points, iota_rows(4), 1.0);
  const SmnnModel model(std::move(space), LabelEncoding({"0", "1"}),
                        init_weights(InitMode::OneHot, 0, 2, 4, sl), sl);
  const auto e = explain(model, vec({0.75, 1.25}));
  CHECK(e.out_of_hull);
  CHECK(e.sphere_mass == doctest::Approx(1.0 / 3.0));
  CHECK(e.contributors.size() == 2);
  check_decomposition(model, e);
  const auto j = to_json(e);
  CHECK(j["out_of_hull"] == true);
  CHECK(j["contributors"].size() == 2);
  for (const char* key : {"query", "predicted_label", "probabilities", "contributors", "sphere_mass"})
    CHECK(j.contains(key));
}

TEST_CASE("explanation SVG") {
  const auto model = trained_spiral();
  const auto names = model.encoding().names();
  SUBCASE("one contributor gives k bars") {
    const auto e = explain(model, model.space().untranslate(model.space().support()[0]));
    REQUIRE(e.contributors.size() == 1);
    CHECK(count_bars(render_explanation_svg(e, names)) == 2);
  }
  SUBCASE("bars per contributor and class, negatives below the axis") {
    Explanation e;
    e.query = vec({0, 0, 0, 0});
    e.predicted_label = "b";
    e.probabilities = vec({0.2, 0.5, 0.3});
    for (int t = 0; t < 5; ++t)
      e.contributors.push_back({static_cast<std::size_t>(t), vec({0, 0, 0, 0}), "a", 0.2, vec({0.3, -0.4, 0.1})});
    const auto svg = render_explanation_svg(e, {"a", "b", "c"});
    CHECK(count_bars(svg) == 15);
    const std::regex axis_re("class=\"axis\" x1=\"[0-9.]+\" y1=\"([0-9.]+)\"");
    std::smatch m;
    REQUIRE(std::regex_search(svg, m, axis_re));
    const double axis_y = std::stod(m[1]);
    const std::regex bar_re("class=\"bar\" x=\"[0-9.]+\" y=\"([0-9.]+)\" width=\"[0-9.]+\" height=\"([0-9.]+)\"[^>]*><title>(-?[0-9.]+)<");
    int negatives = 0;
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), bar_re); it != std::sregex_iterator(); ++it) {
      const double y = std::stod((*it)[1]), h = std::stod((*it)[2]), v = std::stod((*it)[3]);
      if (v < 0) {
        ++negatives;
        CHECK(y == doctest::Approx(axis_y));
      } else {
        CHECK(y + h == doctest::Approx(axis_y));
      }
    }
    CHECK(negatives == 5);
    CHECK(svg == render_explanation_svg(e, {"a", "b", "c"}));
  }
}

TEST_CASE("Iris worked point is explained by a full 4-simplex") {
  const auto iris = load_csv(std::string(SMNN_DATA_DIR) + "/iris.csv");
  const auto [train_set, test_set] = split(iris, 0.75, 20);
  TrainConfig c;
  c.epochs = 1000;
  c.seed = 20;
  const auto model = train(train_set, iota_rows(train_set.size()), c).model;
  const auto e = explain(model, vec({5.5, 2.4, 3.8, 1.1}));
  CHECK(e.contributors.size() == 5);
  CHECK_FALSE(e.out_of_hull);
  CHECK(e.predicted_label == "versicolor");
  CHECK(model.encoding().index(e.predicted_label) == 1);  // class 2 counting from one
  check_decomposition(model, e);
}
