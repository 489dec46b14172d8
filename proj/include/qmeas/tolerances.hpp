// Copyright 2026 The qmeas Authors.
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

namespace qmeas {

/// Numerical thresholds shared by every module. Structural checks
/// (hermiticity, grouping, commutators) are relative to the max-norm of the
/// matrix being checked; everything else is absolute.
struct Tolerances {
    double herm_tol = 1e-10;
    double ortho_tol = 1e-9;
    double recon_tol = 1e-9;
    double group_tol = 1e-8;
    double norm_tol = 1e-10;
    double psd_tol = 1e-10;
    double comp_tol = 1e-10;
    double rank_tol = 1e-10;
    double clamp_tol = 1e-10;
    double comm_tol = 1e-10;
    double marginal_tol = 1e-9;
    double prob_floor = 1e-12;
    double overlap_floor = 1e-12;
    double certify_tol = 1e-10;
    double decomposition_tol = 1e-9;
    double corr_tol = 1e-9;
    double fd_step = 1e-4;
    double oracle_tol = 1e-5;

    /// Overrides the thresholds used to judge the identities checked in
    /// reports (certification, eigenstate defect, correlation spread).
    Tolerances with_check_tol(double tol) const {
        Tolerances t = *this;
        t.certify_tol = tol;
        t.decomposition_tol = tol;
        t.corr_tol = tol;
        return t;
    }
};

} // namespace qmeas
