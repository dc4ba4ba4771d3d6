// Copyright 2026 The Fare Alliance Authors
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

namespace alliance {

struct AllocationResult {
  double f_nc_transit = 0.0;
  double f_nc_mod = 0.0;
  double f_allied = 0.0;
  double delta = 0.0;
  double phi_transit = 0.0;
  double phi_mod = 0.0;
};

// Splits allied revenue: a nonnegative surplus is shared equally on top of
// each operator's non-cooperative revenue; a deficit is borne by transit.
inline AllocationResult allocate(double f_nc_transit, double f_nc_mod, double f_allied) {
  AllocationResult r{f_nc_transit, f_nc_mod, f_allied, 0.0, 0.0, 0.0};
  r.delta = f_allied - (f_nc_transit + f_nc_mod);
  if (r.delta >= 0.0) {
    r.phi_transit = f_nc_transit + r.delta / 2.0;
    r.phi_mod = f_nc_mod + r.delta / 2.0;
  } else {
    r.phi_mod = f_nc_mod;
    r.phi_transit = f_allied - f_nc_mod;
  }
  return r;
}

}  // namespace alliance
