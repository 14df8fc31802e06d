#pragma once

#include <string>

#include "json.hpp"
#include "tamlearn/learner.hpp"

namespace tamlearn {

/// Model files are JSON documents; every real number is written as the
/// shortest decimal that round-trips to the same double.
nlohmann::json model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const nlohmann::json& doc);

void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

nlohmann::json vocabulary_to_json(const Vocabulary& vocab);
Vocabulary vocabulary_from_json(const nlohmann::json& doc);

}  // namespace tamlearn
