#include "clic/metrics/export.hpp"

#include <sstream>

namespace clic::metrics {

std::string export_embeddings_csv(model::ClicNet& net, const training::LoadedDataset& data,
                                  const std::vector<int>& idx, const model::Mat* context,
                                  int batch_size) {
    const auto eval = training::evaluate(net, data, idx, context, batch_size);
    const int dim = eval.penultimate.cols;

    std::ostringstream out;
    out << "id,label";
    for (int d = 0; d < dim; ++d) out << ",e" << d;
    out << '\n';
    out.precision(17);
    for (std::size_t i = 0; i < idx.size(); ++i) {
        out << data.ids[idx[i]] << ',' << data::class_name(data.labels[idx[i]]);
        const double* row = eval.penultimate.row(static_cast<int>(i));
        for (int d = 0; d < dim; ++d) out << ',' << row[d];
        out << '\n';
    }
    return out.str();
}

}  // namespace clic::metrics
