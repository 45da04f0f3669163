#pragma once

#include <fstream>
#include <istream>
#include <sstream>
#include <string>

#include "pedtrack/synth.hpp"
#include "pedtrack/util.hpp"

namespace pedtrack {

namespace detail {

inline std::array<int, 3> parse_rgb(const std::string& value, const std::string& context) {
  auto parts = split(value, ',');
  if (parts.size() != 3) throw InputError(context + ": expected r,g,b");
  return {parse_int(parts[0], context), parse_int(parts[1], context),
          parse_int(parts[2], context)};
}

// One actor line, e.g.
//   disk size=8 color=200,60,60 entry=1 exit=30 path=20,120;300,120 hide=12..13
inline ActorSpec parse_actor(const std::string& value, const std::string& context) {
  std::istringstream in(value);
  std::string token;
  if (!(in >> token)) throw InputError(context + ": empty actor definition");

  ActorSpec actor;
  if (token == "disk")
    actor.shape = ActorSpec::Shape::Disk;
  else if (token == "rectangle")
    actor.shape = ActorSpec::Shape::Rectangle;
  else
    throw InputError(context + ": unknown shape '" + token + "'");

  while (in >> token) {
    auto eq = token.find('=');
    if (eq == std::string::npos)
      throw InputError(context + ": expected key=value, got '" + token + "'");
    std::string key = token.substr(0, eq);
    std::string val = token.substr(eq + 1);
    if (key == "size") {
      actor.size = parse_double(val, context);
    } else if (key == "color") {
      actor.color = parse_rgb(val, context);
    } else if (key == "entry") {
      actor.entry = parse_int(val, context);
    } else if (key == "exit") {
      actor.exit = parse_int(val, context);
    } else if (key == "path") {
      for (const auto& wp : split(val, ';')) {
        auto xy = split(wp, ',');
        if (xy.size() != 2) throw InputError(context + ": waypoint must be x,y");
        actor.waypoints.push_back({parse_double(xy[0], context), parse_double(xy[1], context)});
      }
    } else if (key == "hide") {
      for (const auto& range : split(val, ',')) {
        auto dots = range.find("..");
        if (dots == std::string::npos)
          throw InputError(context + ": hide range must be a..b");
        actor.hide.emplace_back(parse_int(range.substr(0, dots), context),
                                parse_int(range.substr(dots + 2), context));
      }
    } else {
      throw InputError(context + ": unknown actor key '" + key + "'");
    }
  }
  return actor;
}

}  // namespace detail

/// Flat key=value scenario description; '#' starts a comment. The actor key
/// repeats once per actor.
inline Scenario parse_scenario(std::istream& in, const std::string& path) {
  Scenario scenario;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw InputError(path + ":" + std::to_string(line_no) + ": expected key=value");
    std::string key(trim(t.substr(0, eq)));
    std::string value(trim(t.substr(eq + 1)));
    std::string context = path + ":" + std::to_string(line_no);

    if (key == "width")
      scenario.width = parse_int(value, context);
    else if (key == "height")
      scenario.height = parse_int(value, context);
    else if (key == "background")
      scenario.background = detail::parse_rgb(value, context);
    else if (key == "frames")
      scenario.frame_count = parse_int(value, context);
    else if (key == "frame_interval")
      scenario.frame_interval = parse_double(value, context);
    else if (key == "seed")
      scenario.seed = static_cast<unsigned>(parse_long(value, context));
    else if (key == "noise")
      scenario.noise_amplitude = parse_int(value, context);
    else if (key == "actor")
      scenario.actors.push_back(detail::parse_actor(value, context));
    else
      throw InputError(context + ": unknown scenario key '" + key + "'");
  }
  scenario.validate();
  return scenario;
}

inline Scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open");
  return parse_scenario(in, path);
}

}  // namespace pedtrack
