// SPDX-License-Identifier: Apache-2.0
//
// irscpd - structured tensor channel estimation for IRS-assisted mmWave OFDM
// Copyright (C) 2026 The irscpd authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef IRSCPD_SERIALIZATION_HPP
#define IRSCPD_SERIALIZATION_HPP

#include <filesystem>
#include <iosfwd>
#include <string>

#include "irscpd/experiment.hpp"

///
/// JSON persistence for configurations, simulated instances and estimates.
/// The formats are documented in docs/config_format.md and
/// docs/instance_format.md. Parsing is strict: unknown keys and type
/// mismatches throw std::invalid_argument naming the offending key.
///
namespace irscpd::io
{

/// System keys override the defaults of SystemConfig; absent keys keep them.
SystemConfig parse_system_config(const std::string &json_text);
std::string system_config_to_json(const SystemConfig &cfg);

eval::ExperimentConfig parse_experiment_config(const std::string &json_text);
eval::ExperimentConfig load_experiment_config(const std::filesystem::path &path);
std::string experiment_config_to_json(const eval::ExperimentConfig &cfg);

/// Instance container, format "irscpd-instance", version 1.
inline constexpr int kInstanceFormatVersion = 1;
void write_instance(std::ostream &os, const eval::Instance &inst);
eval::Instance read_instance(std::istream &is);
void save_instance(const std::filesystem::path &path, const eval::Instance &inst);
eval::Instance load_instance(const std::filesystem::path &path);

/// Estimate summary: method, metrics, failure, estimated paths, diagnostics.
std::string outcome_to_json(const eval::MethodOutcome &outcome);

std::string identifiability_to_json(const scpd::IdentifiabilityReport &report,
                                    const SystemConfig &cfg);

} // namespace irscpd::io

#endif
