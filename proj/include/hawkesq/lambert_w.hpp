// Copyright 2026 The hawkesq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HAWKESQ_LAMBERT_W_HPP_
#define HAWKESQ_LAMBERT_W_HPP_

namespace hawkesq {

// Principal branch W0 of the Lambert W function on [-1/e, inf), solving
// w e^w = x by Halley iteration to ~1e-15 relative. Throws OutOfDomain for
// x < -1/e (beyond a few ulps of rounding slack).
double lambert_w0(double x);

}  // namespace hawkesq

#endif  // HAWKESQ_LAMBERT_W_HPP_
