#include "wvi/stats.hpp"

namespace wvi::stats {

Counters& counters() {
  static Counters c;
  return c;
}

void reset() {
  Counters& c = counters();
  c.scene_builds.store(0);
  c.renders.store(0);
  c.raycasts.store(0);
  c.wvi_counts.store(0);
}

}  // namespace wvi::stats
