// Copyright 2026 The sotlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SOTLAB_CLI_SERIALIZE_HPP_
#define SOTLAB_CLI_SERIALIZE_HPP_

#include <string>
#include <vector>

#include "cli/config.hpp"
#include "sotlab/degrade.hpp"
#include "sotlab/metrics.hpp"
#include "sotlab/model.hpp"
#include "sotlab/sparsity.hpp"
#include "sotlab/train.hpp"
#include "sotlab/transport.hpp"

namespace sotlab::cli {

/// "%.17g"; non-finite values print as inf, -inf or nan.
std::string format_double(double value);

/// A JSON number, or the strings "inf", "-inf", "nan" for non-finite values.
Json json_number(double value);
double number_from_json(const Json& value);

Json to_json(const TrainConfig& cfg);
TrainConfig train_config_from_json(const Json& doc);

/// Gains are stored as interleaved real and imaginary parts, row-major.
Json to_json(const RestorationModel& model);
RestorationModel model_from_json(const Json& doc);

Json to_json(const TransportPlan& plan);
Json to_json(const GGFit& fit);
Json to_json(const MetricReport& report);
Json to_json(const DegradationSpec& spec);

/// Columns bin_lo,bin_hi,count.
std::string histogram_csv(const Histogram& histogram);

/// Comment header naming the objective, then iter,fidelity,divergence,total.
std::string train_log_csv(const TrainConfig& cfg, const std::vector<LogRow>& rows);

}  // namespace sotlab::cli

#endif  // SOTLAB_CLI_SERIALIZE_HPP_
