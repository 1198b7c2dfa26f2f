#pragma once

#include <string>

#include "railsched/railsched.hpp"

namespace fixture {

inline std::string data(const std::string& name) { return std::string(RAILSCHED_DATA_DIR) + "/" + name; }

inline railsched::Instance testnet() { return railsched::load_instance_file(data("testnet.json")); }
inline railsched::Instance iran() { return railsched::load_instance_file(data("iran-aggregated.json")); }

inline railsched::DisruptionScenario scenario(const railsched::Instance& inst, const std::string& name) {
    return railsched::load_scenario_file(data(name), inst);
}

inline railsched::model::ModelConfig config(railsched::Minute beta,
                                            railsched::model::Variant v = railsched::model::Variant::basic) {
    railsched::model::ModelConfig c;
    c.beta = beta;
    c.variant = v;
    return c;
}

// Two stations joined by one single-track block of `travel` minutes.
inline railsched::json line(railsched::Minute travel, railsched::Minute horizon = 60) {
    using railsched::json;
    return json{{"grid", {{"delta", 5}, {"horizon", horizon}, {"start", 0}}},
                {"nodes", json::array({{{"id", "A"}}, {{"id", "B"}}, {{"id", "C"}}})},
                {"blocks", json::array({{{"id", "AB"}, {"from", "A"}, {"to", "B"}, {"tracks", 1},
                                         {"travel_time", travel}, {"headway", 5}, {"capacity", 2}},
                                        {{"id", "BC"}, {"from", "B"}, {"to", "C"}, {"tracks", 1},
                                         {"travel_time", travel}, {"headway", 5}, {"capacity", 2}}})},
                {"trains", json::array()}};
}

inline railsched::json train(const std::string& id, std::vector<std::string> nodes, std::vector<std::string> route,
                             railsched::Minute departure, railsched::Minute travel) {
    using railsched::json;
    json stops = json::array();
    railsched::Minute at = departure;
    for (const auto& n : nodes) {
        stops.push_back({{"node", n}, {"arrive", at}, {"depart", at}});
        at += travel;
    }
    return json{{"id", id},
                {"origin", nodes.front()},
                {"destination", nodes.back()},
                {"direction", nodes.front() < nodes.back() ? "positive" : "negative"},
                {"departure", departure},
                {"route", route},
                {"stops", stops}};
}

}  // namespace fixture
