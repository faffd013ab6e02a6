// Copyright 2026 The Balajoin Authors.
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


#pragma once

#include <filesystem>
#include <vector>

#include <json.hpp>

#include "balajoin/simulator.h"

namespace balajoin {

// Full report serialization. The trace is included when present.
nlohmann::json report_to_json(const SimReport& report);
SimReport report_from_json(const nlohmann::json& j);

// A report file holds a JSON array of reports.
void write_reports(const std::vector<SimReport>& reports, const std::filesystem::path& path);
std::vector<SimReport> read_reports(const std::filesystem::path& path);

}  // namespace balajoin
