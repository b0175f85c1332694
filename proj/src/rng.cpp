#include "netpsych/rng.hpp"

#include "netpsych/distributions.hpp"

namespace netpsych {

double Rng::normal() { return norm_quantile(u01_open()); }

}  // namespace netpsych
