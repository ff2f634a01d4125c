#include <doctest.h>

#include <cmath>

#include "hinfraud/classifier.hpp"
#include "hinfraud/error.hpp"
#include "hinfraud/rng.hpp"

using namespace hinfraud;

namespace {

// linearly separable two-feature set
void separable_data(Matrix& x, std::vector<std::uint8_t>& y) {
  Rng rng(51);
  x = Matrix(40, 2);
  y.assign(40, 0);
  for (std::size_t i = 0; i < 40; ++i) {
    const bool fraud = i % 2 == 0;
    x(i, 0) = (fraud ? 3.0 : -3.0) + rng.next_gaussian() * 0.3;
    x(i, 1) = (fraud ? 2.0 : -2.0) + rng.next_gaussian() * 0.3;
    y[i] = fraud ? 1 : 0;
  }
}

ClassifierSpec logistic_spec() {
  ClassifierSpec spec;
  spec.kind = ClassifierKind::logistic_regression;
  spec.epochs = 400;
  spec.learning_rate = 0.5;
  spec.seed = 1;
  return spec;
}

ClassifierSpec forest_spec(int trees = 15) {
  ClassifierSpec spec;
  spec.kind = ClassifierKind::random_forest;
  spec.tree_count = trees;
  spec.max_depth = 6;
  spec.seed = 9;
  return spec;
}

}  // namespace

TEST_CASE("logistic learns a separable problem") {
  Matrix x;
  std::vector<std::uint8_t> y;
  separable_data(x, y);
  const auto model = fit(logistic_spec(), x, y);
  const auto labels = predict_labels(model, x, 0.5);
  CHECK(labels == y);
}

TEST_CASE("single-class training sets are rejected") {
  Matrix x(10, 2, 0.5);
  std::vector<std::uint8_t> y(10, 0);
  try {
    (void)fit(logistic_spec(), x, y);
    FAIL("expected SingleClassTrainingSet");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::single_class_training_set);
  }
}

TEST_CASE("non-finite features are rejected") {
  Matrix x(4, 1);
  x(0, 0) = 1.0;
  x(1, 0) = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::uint8_t> y{0, 1, 0, 1};
  try {
    (void)fit(logistic_spec(), x, y);
    FAIL("expected NonFiniteFeature");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::non_finite_feature);
  }
}

TEST_CASE("forest training is bit-deterministic under a fixed seed") {
  Matrix x;
  std::vector<std::uint8_t> y;
  separable_data(x, y);
  const auto a = fit(forest_spec(), x, y, 2);
  const auto b = fit(forest_spec(), x, y, 1);  // thread count must not matter
  CHECK(a.to_json_text() == b.to_json_text());

  auto different_seed = forest_spec();
  different_seed.seed = 10;
  const auto c = fit(different_seed, x, y);
  CHECK(a.to_json_text() != c.to_json_text());
}

TEST_CASE("logistic gradient matches central finite differences") {
  Rng rng(52);
  Matrix x(12, 3);
  std::vector<std::uint8_t> y(12);
  for (std::size_t i = 0; i < 12; ++i) {
    for (std::size_t j = 0; j < 3; ++j) x(i, j) = rng.next_gaussian();
    y[i] = rng.next_double() < 0.5 ? 1 : 0;
  }
  y[0] = 0;
  y[1] = 1;
  std::vector<double> w{0.3, -0.2, 0.15};
  const double bias = 0.05;
  const double l2 = 0.01;

  double bias_gradient = 0.0;
  const auto gradient = logistic_loss_gradient(x, y, w, bias, l2, &bias_gradient);

  const double h = 1e-6;
  for (std::size_t j = 0; j < w.size(); ++j) {
    auto w_plus = w;
    auto w_minus = w;
    w_plus[j] += h;
    w_minus[j] -= h;
    const double numeric =
        (logistic_loss(x, y, w_plus, bias, l2) - logistic_loss(x, y, w_minus, bias, l2)) / (2 * h);
    CHECK(gradient[j] == doctest::Approx(numeric).epsilon(1e-6));
  }
  const double numeric_bias =
      (logistic_loss(x, y, w, bias + h, l2) - logistic_loss(x, y, w, bias - h, l2)) / (2 * h);
  CHECK(bias_gradient == doctest::Approx(numeric_bias).epsilon(1e-6));
}

TEST_CASE("probability outputs") {
  SUBCASE("zero-weight logistic predicts one half") {
    TrainedModel model;
    model.kind = ClassifierKind::logistic_regression;
    model.feature_count = 2;
    model.weights = {0.0, 0.0};
    model.bias = 0.0;
    Matrix x(3, 2, 1.0);
    for (const double p : predict_proba(model, x)) CHECK(p == doctest::Approx(0.5));
  }
  SUBCASE("single-stump forest probabilities are 0 or 1") {
    Matrix x;
    std::vector<std::uint8_t> y;
    separable_data(x, y);
    auto spec = forest_spec(1);
    spec.max_depth = 1;
    const auto model = fit(spec, x, y);
    for (const double p : predict_proba(model, x)) {
      CHECK((p == 0.0 || p == 1.0));
    }
  }
  SUBCASE("hand-computed sigmoid") {
    TrainedModel model;
    model.kind = ClassifierKind::logistic_regression;
    model.feature_count = 2;
    model.weights = {1.0, -2.0};
    model.bias = 0.5;
    Matrix x(1, 2);
    x(0, 0) = 0.3;
    x(0, 1) = 0.1;
    // score = 0.5 + 0.3 - 0.2 = 0.6
    CHECK(predict_proba(model, x)[0] == doctest::Approx(1.0 / (1.0 + std::exp(-0.6))).epsilon(1e-12));
  }
  SUBCASE("probabilities stay inside the unit interval") {
    Matrix x;
    std::vector<std::uint8_t> y;
    separable_data(x, y);
    for (const auto& spec : {logistic_spec(), forest_spec()}) {
      const auto model = fit(spec, x, y);
      for (const double p : predict_proba(model, x)) {
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
      }
    }
  }
}

TEST_CASE("label thresholding") {
  const std::vector<double> proba{0.2, 0.6, 0.5};
  CHECK(labels_from_proba(proba, 0.5) == std::vector<std::uint8_t>{0, 1, 1});  // tie goes to fraud
  CHECK(labels_from_proba(proba, 1.01) == std::vector<std::uint8_t>{0, 0, 0});
  CHECK(labels_from_proba(proba, 0.0) == std::vector<std::uint8_t>{1, 1, 1});
}

TEST_CASE("predict rejects mismatched feature counts") {
  Matrix x;
  std::vector<std::uint8_t> y;
  separable_data(x, y);
  const auto model = fit(logistic_spec(), x, y);
  Matrix wrong(4, 3, 0.0);
  try {
    (void)predict_proba(model, wrong);
    FAIL("expected ShapeMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::shape_mismatch);
  }
}

TEST_CASE("model serialization round trip") {
  Matrix x;
  std::vector<std::uint8_t> y;
  separable_data(x, y);
  for (const auto& spec : {logistic_spec(), forest_spec()}) {
    const auto model = fit(spec, x, y);
    const auto restored = TrainedModel::from_json_text(model.to_json_text());
    CHECK(predict_proba(model, x) == predict_proba(restored, x));
  }
}

TEST_CASE("duplicate feature columns train without error") {
  Matrix x;
  std::vector<std::uint8_t> y;
  separable_data(x, y);
  const auto doubled = Matrix::hstack(x, x);
  const auto model = fit(forest_spec(), doubled, y);
  const auto proba = predict_proba(model, doubled);
  CHECK(proba.size() == y.size());
}

TEST_CASE("spec validation") {
  ClassifierSpec spec;
  spec.tree_count = 0;
  try {
    spec.validate();
    FAIL("expected ConfigInvalid");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::config_invalid);
  }
}
