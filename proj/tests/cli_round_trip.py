# Copyright 2026 The Hyperstab Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""gamma0^2 from a simulate run must come back from `audit` on its traces."""

import json
import os
import subprocess
import sys


def main():
    exe, run_dir = sys.argv[1:]
    with open(os.path.join(run_dir, "report.json")) as f:
        run_gamma = json.load(f)["gamma0_sq"]
    proc = subprocess.run([exe, "audit", "--traces", os.path.join(run_dir, "traces.csv")],
                          capture_output=True, text=True)
    if proc.returncode != 0:
        print(proc.stderr)
        return 1
    audit_gamma = json.loads(proc.stdout)["feedback_gamma0_sq"]
    print(f"run {run_gamma!r} audit {audit_gamma!r}")
    return 0 if abs(run_gamma - audit_gamma) <= 1e-12 else 1


if __name__ == "__main__":
    sys.exit(main())
