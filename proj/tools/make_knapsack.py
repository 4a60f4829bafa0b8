# Copyright 2026 The ibra Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Writes the bundled 30-variable multi-knapsack base instance."""
import random, sys
seed, m = 7, 5
rng = random.Random(seed)
n = 30
w = [[rng.randint(10, 60) for _ in range(n)] for _ in range(m)]
v = [sum(w[k][j] for k in range(m))//m + rng.randint(0,8) for j in range(n)]
cap = [sum(r)//2 for r in w]
L = ["NAME knapsack30", "ROWS", " N value"] + [f" L cap{k+1}" for k in range(m)] + ["COLUMNS", "    MARKER 'MARKER' 'INTORG'"]
for j in range(n):
    L.append(f"    x{j+1} value {-v[j]}")
    for k in range(m):
        L.append(f"    x{j+1} cap{k+1} {w[k][j]}")
L.append("    MARKER 'MARKER' 'INTEND'")
L.append("RHS")
for k in range(m): L.append(f"    RHS cap{k+1} {cap[k]}")
L.append("BOUNDS")
for j in range(n): L.append(f" UP BND x{j+1} 1")
L.append("ENDATA")
open(sys.argv[1] if len(sys.argv) > 1 else "data/knapsack30.mps", "w").write("\n".join(L)+"\n")
