import init, { orbits, energy_landscape, rqaoa, preset } from "./pkg/qaoa_symmetry_demo.js";

const $ = (id) => document.getElementById(id);
const graphCanvas = $("graph");
const heatCanvas = $("heat");

function status(text, isError = false) {
  $("status").textContent = text;
  $("status").className = isError ? "error" : "";
}

function palette(k, n) {
  return `hsl(${Math.round((360 * k) / Math.max(n, 1))}, 70%, 45%)`;
}

function layout(n) {
  const r = graphCanvas.width / 2 - 30;
  const c = graphCanvas.width / 2;
  return Array.from({ length: n }, (_, i) => {
    const a = (2 * Math.PI * i) / n - Math.PI / 2;
    return [c + r * Math.cos(a), c + r * Math.sin(a)];
  });
}

function drawGraph(view, vertexColors) {
  const ctx = graphCanvas.getContext("2d");
  ctx.clearRect(0, 0, graphCanvas.width, graphCanvas.height);
  const pos = layout(view.n);
  ctx.lineWidth = 3;
  for (const [u, v, , orbit] of view.edges) {
    ctx.strokeStyle = palette(orbit, view.n_orb);
    ctx.beginPath();
    ctx.moveTo(...pos[u]);
    ctx.lineTo(...pos[v]);
    ctx.stroke();
  }
  pos.forEach(([x, y], i) => {
    ctx.fillStyle = vertexColors ? vertexColors[i] : "#333";
    ctx.beginPath();
    ctx.arc(x, y, 9, 0, 2 * Math.PI);
    ctx.fill();
    ctx.fillStyle = "#fff";
    ctx.font = "10px sans-serif";
    ctx.textAlign = "center";
    ctx.textBaseline = "middle";
    ctx.fillText(String(i), x, y);
  });
}

function drawHeat(land) {
  const ctx = heatCanvas.getContext("2d");
  const { steps, values } = land;
  const lo = Math.min(...values);
  const hi = Math.max(...values);
  const cell = heatCanvas.width / steps;
  for (let i = 0; i < steps; i++) {
    for (let j = 0; j < steps; j++) {
      const t = hi > lo ? (values[i * steps + j] - lo) / (hi - lo) : 0;
      ctx.fillStyle = `hsl(${240 - 240 * t}, 80%, 50%)`;
      ctx.fillRect(j * cell, (steps - 1 - i) * cell, cell + 1, cell + 1);
    }
  }
}

function current() {
  return [$("edges").value, $("weighted").checked];
}

function showOrbits() {
  const view = JSON.parse(orbits(...current()));
  drawGraph(view);
  status(`${view.edges.length} edges in ${view.n_orb} orbit(s); ${view.generators.length} generator(s)`);
  return view;
}

function run(action) {
  try {
    action();
  } catch (e) {
    status(String(e.message ?? e), true);
  }
}

$("orbits").onclick = () => run(showOrbits);

$("landscape").onclick = () =>
  run(() => {
    showOrbits();
    const land = JSON.parse(energy_landscape(...current(), Number($("steps").value)));
    drawHeat(land);
    const [b, g, e] = land.best;
    status(
      `p = 1 landscape, beta rows (0..pi/2), gamma columns (0..pi)\n` +
        `best on grid: beta ${b.toFixed(3)}, gamma ${g.toFixed(3)}, <C> ${e.toFixed(4)}\n` +
        `simulations: ${land.simulations_reduced} reduced vs ${land.simulations_full} full`
    );
  });

$("rqaoa").onclick = () =>
  run(() => {
    const view = showOrbits();
    const res = JSON.parse(rqaoa(...current(), Number($("cutoff").value), BigInt($("seed").value)));
    drawGraph(view, res.assignment.map((b) => (b ? "#d33" : "#36c")));
    const steps = res.steps
      .map((s) => `z${s.edge[1]} = ${s.sign > 0 ? "+" : "-"}z${s.edge[0]}  (corr ${s.correlation.toFixed(3)})`)
      .join("\n");
    status(`cut value ${res.objective}\norbits per round: ${res.orbits_per_round.join(", ")}\n${steps}`);
  });

$("preset").onchange = () => {
  $("edges").value = preset($("preset").value) ?? "";
  run(showOrbits);
};

await init();
$("preset").onchange();
