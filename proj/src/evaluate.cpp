#include "smnn/evaluate.hpp"

#include <cmath>

#include "smnn/error.hpp"

namespace smnn {

EvalReport evaluate(const SmnnModel& model, const LabeledDataset& data) {
  if (data.dim() != model.space().dim())
    throw Error(ErrorKind::DimensionMismatch, "dataset has " + std::to_string(data.dim()) +
                                                  " features, model expects " + std::to_string(model.space().dim()));
  const std::size_t k = model.num_classes();
  EvalReport r;
  r.n = data.size();
  r.confusion.assign(k, std::vector<std::size_t>(k, 0));
  double loss_sum = 0.0;
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const std::size_t truth = model.encoding().index(data.labels[i]);
    SparseXi embedding;
    try {
      embedding = xi(model.space(), data.points[i]);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::OutsideBall) throw;
      // Chance-level loss; the miss is booked against the next class.
      ++r.n_outside_ball;
      ++r.n_out_of_hull;
      loss_sum += std::log(static_cast<double>(k));
      ++r.confusion[truth][(truth + 1) % k];
      continue;
    }
    if (embedding.out_of_hull()) ++r.n_out_of_hull;
    const Vector s = model.forward(embedding);
    const std::size_t predicted = argmax(s);
    loss_sum += cross_entropy(s, truth);
    ++r.confusion[truth][predicted];
    if (predicted == truth) ++correct;
  }
  if (r.n > 0) {
    r.accuracy = static_cast<double>(correct) / static_cast<double>(r.n);
    r.mean_loss = loss_sum / static_cast<double>(r.n);
  }
  return r;
}

nlohmann::json to_json(const EvalReport& report) {
  return {{"accuracy", report.accuracy},
          {"mean_loss", report.mean_loss},
          {"confusion", report.confusion},
          {"n", report.n},
          {"n_out_of_hull", report.n_out_of_hull},
          {"n_outside_ball", report.n_outside_ball}};
}

}  // namespace smnn
