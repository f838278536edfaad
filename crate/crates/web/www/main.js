import init, { ccm_compare, window_demo, stratify_demo } from "./pkg/landcore_web.js";

const canvas = document.getElementById("map");
const ctx = canvas.getContext("2d");
const out = document.getElementById("out");
const $ = (id) => document.getElementById(id);
const num = (id) => Number($(id).value);

let demo = "ccm";
let doc = "";
let ends = [[50, 50], [950, 950]];
let picking = 0;
let win = [10, 10, 35, 35];
let drag = null;
let extent = [0, 0, 1000, 1000];

// world <-> canvas, y up
function scale() {
  const [x0, y0, x1, y1] = extent;
  const s = Math.min(canvas.width / (x1 - x0), canvas.height / (y1 - y0));
  return {
    to: ([x, y]) => [(x - x0) * s, canvas.height - (y - y0) * s],
    from: (px, py) => [x0 + px / s, y0 + (canvas.height - py) / s],
  };
}

function ringPath(rings, t) {
  ctx.beginPath();
  for (const ring of rings) {
    ring.forEach((p, i) => (i ? ctx.lineTo : ctx.moveTo).apply(ctx, t.to(p)));
    ctx.closePath();
  }
}

function polyline(pts, t, style, width) {
  if (pts.length < 2) return;
  ctx.beginPath();
  pts.forEach((p, i) => (i ? ctx.lineTo : ctx.moveTo).apply(ctx, t.to(p)));
  ctx.strokeStyle = style;
  ctx.lineWidth = width;
  ctx.stroke();
}

function dot(p, t, style, r = 4) {
  const [x, y] = t.to(p);
  ctx.beginPath();
  ctx.arc(x, y, r, 0, 2 * Math.PI);
  ctx.fillStyle = style;
  ctx.fill();
}

function weightColour(w) {
  if (!isFinite(w)) return "#5b8fd6";
  const g = Math.max(0, Math.min(1, Math.log2(w + 1) / 3));
  return `rgb(${Math.round(240 - 120 * g)},${Math.round(235 - 90 * g)},${Math.round(200 - 120 * g)})`;
}

function drawCcm() {
  const r = JSON.parse(ccm_compare(doc, ...ends[0], ...ends[1], num("cell"), num("conn"), num("steiner")));
  extent = r.extent;
  const t = scale();
  ctx.fillStyle = "#fff";
  ctx.fillRect(0, 0, canvas.width, canvas.height);
  for (const reg of r.regions) {
    ringPath(reg.rings, t);
    ctx.fillStyle = weightColour(reg.weight);
    ctx.fill("evenodd");
    ctx.strokeStyle = "#888";
    ctx.lineWidth = 1;
    ctx.stroke();
  }
  polyline(r.raster.vertices, t, "#d33", 2);
  polyline(r.vector.vertices, t, "#111", 2);
  dot(ends[0], t, "#080");
  dot(ends[1], t, "#c60");
  const line = (p) => `${p.method.padEnd(12)} ${p.cost === null ? "no path" : p.cost.toFixed(2)}  (${p.vertices.length} vertices)`;
  out.textContent = `${line(r.raster)}   red\n${line(r.vector)}   black`;
}

function drawWindow() {
  const r = JSON.parse(window_demo(num("grid"), num("subdiv"), ...win));
  extent = r.extent;
  const t = scale();
  ctx.fillStyle = "#fff";
  ctx.fillRect(0, 0, canvas.width, canvas.height);
  const n = num("grid");
  ctx.strokeStyle = "#ccc";
  ctx.lineWidth = 1;
  for (let i = 0; i <= n; i++) {
    polyline([[i * 10, 0], [i * 10, n * 10]], t, "#ddd", 1);
    polyline([[0, i * 10], [n * 10, i * 10]], t, "#ddd", 1);
  }
  let missed = 0;
  for (const a of r.areas) {
    ringPath(a.rings, t);
    const lost = a.bbox === "incomplete";
    missed += lost;
    ctx.fillStyle = lost ? "rgba(220,60,60,.45)" : "rgba(60,140,220,.35)";
    ctx.fill("evenodd");
    ctx.strokeStyle = "#333";
    ctx.stroke();
  }
  const [a, b] = [t.to([win[0], win[1]]), t.to([win[2], win[3]])];
  ctx.strokeStyle = "#000";
  ctx.lineWidth = 2;
  ctx.setLineDash([6, 4]);
  ctx.strokeRect(a[0], b[1], b[0] - a[0], a[1] - b[1]);
  ctx.setLineDash([]);
  out.textContent =
    `areas hit: ${r.areas.length}, rebuilt by abox: ${r.areas.filter((x) => x.abox === "complete").length}, ` +
    `by bbox: ${r.areas.length - missed} (red = bbox incomplete)\n` +
    `vertices stored ${r.stored_vertices} of ${r.input_vertices}`;
}

const levelColour = { high: "#2e7d32", medium: "#c0a000", low: "#bbb" };

function drawStrata() {
  const r = JSON.parse(stratify_demo(doc, num("block"), num("samples"), BigInt(num("seed"))));
  extent = r.extent;
  const t = scale();
  ctx.fillStyle = "#fff";
  ctx.fillRect(0, 0, canvas.width, canvas.height);
  for (const s of r.strata) {
    ctx.fillStyle = levelColour[s.level.toLowerCase()] + "55";
    for (const [x0, y0, x1, y1] of s.blocks) {
      const [a, b] = [t.to([x0, y0]), t.to([x1, y1])];
      ctx.fillRect(a[0], b[1], b[0] - a[0], a[1] - b[1]);
    }
  }
  for (const f of r.fields) {
    ringPath(f, t);
    ctx.strokeStyle = "#333";
    ctx.lineWidth = 1;
    ctx.stroke();
  }
  for (const p of r.points) dot(p, t, "#a00", 3);
  out.textContent = r.strata
    .map((s) => `${s.level.padEnd(7)} ${String(s.blocks.length).padStart(3)} blocks  ${s.area.toFixed(0).padStart(8)} m2  ${s.samples} samples`)
    .join("\n");
}

function draw() {
  out.classList.remove("err");
  try {
    ({ ccm: drawCcm, window: drawWindow, strata: drawStrata })[demo]();
  } catch (e) {
    out.classList.add("err");
    out.textContent = String(e.message ?? e);
  }
}

function world(ev) {
  const b = canvas.getBoundingClientRect();
  return scale().from(ev.clientX - b.left, ev.clientY - b.top);
}

canvas.addEventListener("mousedown", (ev) => {
  if (demo === "ccm") {
    ends[picking] = world(ev);
    picking = 1 - picking;
    draw();
  } else if (demo === "window") {
    drag = world(ev);
  }
});
canvas.addEventListener("mousemove", (ev) => {
  if (!drag) return;
  const p = world(ev);
  win = [Math.min(drag[0], p[0]), Math.min(drag[1], p[1]), Math.max(drag[0], p[0]), Math.max(drag[1], p[1])];
  draw();
});
window.addEventListener("mouseup", () => (drag = null));

for (const b of document.querySelectorAll("nav button")) {
  b.addEventListener("click", () => {
    demo = b.dataset.demo;
    document.querySelectorAll("nav button").forEach((x) => x.classList.toggle("on", x === b));
    for (const id of ["ccm", "window", "strata"]) $(id).hidden = id !== demo;
    draw();
  });
}
for (const el of document.querySelectorAll("fieldset input:not([type=file]), fieldset select")) el.addEventListener("change", draw);
$("doc").addEventListener("change", async (ev) => {
  const f = ev.target.files[0];
  doc = f ? await f.text() : "";
  draw();
});

await init();
draw();
