import init, { Explorer } from "./pkg/kgatlas_wasm.js";

const COLORS = { Category: "#e8a33d", Product: "#3d7be8", Brand: "#3dbb6b", Model: "#9b59b6", Price: "#d9534f" };
const canvas = document.getElementById("graph");
const ctx = canvas.getContext("2d");
const $ = (id) => document.getElementById(id);

let ex;
let nodes = new Map();
let links = new Map();
let selected = null;

function add(view) {
  const w = canvas.width, h = canvas.height;
  const anchor = selected != null && nodes.get(selected);
  for (const n of view.nodes) {
    if (nodes.has(n.id)) continue;
    const x = anchor ? anchor.x + (Math.random() - 0.5) * 60 : w / 2 + (Math.random() - 0.5) * w / 2;
    const y = anchor ? anchor.y + (Math.random() - 0.5) * 60 : h / 2 + (Math.random() - 0.5) * h / 2;
    nodes.set(n.id, { ...n, x, y, vx: 0, vy: 0 });
  }
  for (const l of view.links) links.set(l.id, l);
}

function tick() {
  const list = [...nodes.values()];
  for (const a of list) {
    for (const b of list) {
      if (a === b) continue;
      const dx = a.x - b.x, dy = a.y - b.y;
      const d2 = Math.max(dx * dx + dy * dy, 25);
      a.vx += (dx / d2) * 300;
      a.vy += (dy / d2) * 300;
    }
  }
  for (const l of links.values()) {
    const s = nodes.get(l.source), t = nodes.get(l.target);
    if (!s || !t) continue;
    const dx = t.x - s.x, dy = t.y - s.y;
    const d = Math.hypot(dx, dy) || 1;
    const f = (d - 80) * 0.02;
    s.vx += (dx / d) * f; s.vy += (dy / d) * f;
    t.vx -= (dx / d) * f; t.vy -= (dy / d) * f;
  }
  for (const n of list) {
    n.vx += (canvas.width / 2 - n.x) * 0.002;
    n.vy += (canvas.height / 2 - n.y) * 0.002;
    n.vx *= 0.6; n.vy *= 0.6;
    n.x += n.vx; n.y += n.vy;
  }
}

function draw() {
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  ctx.strokeStyle = "#bbb";
  for (const l of links.values()) {
    const s = nodes.get(l.source), t = nodes.get(l.target);
    if (!s || !t) continue;
    ctx.beginPath(); ctx.moveTo(s.x, s.y); ctx.lineTo(t.x, t.y); ctx.stroke();
  }
  for (const n of nodes.values()) {
    ctx.fillStyle = COLORS[n.label] || "#888";
    ctx.beginPath(); ctx.arc(n.x, n.y, n.id === selected ? 9 : 6, 0, 2 * Math.PI); ctx.fill();
    ctx.fillStyle = "#333";
    ctx.fillText(n.properties.name, n.x + 8, n.y + 4);
  }
}

function loop() {
  tick();
  draw();
  requestAnimationFrame(loop);
}

function show(fn) {
  try {
    return fn();
  } catch (e) {
    $("report").innerHTML = `<span class="err">${e.message || e}</span>`;
  }
}

function select(id) {
  selected = id;
  const d = JSON.parse(ex.node(id));
  $("title").textContent = `${d.label}: ${d.properties.name}`;
  $("detail").textContent = JSON.stringify({ ...d.properties, degree: d.degree }, null, 2);
  $("report").textContent = "";
  $("expand").disabled = false;
  $("introduce").disabled = d.label !== "Product";
}

function resize() {
  canvas.width = canvas.clientWidth;
  canvas.height = canvas.clientHeight;
}

$("search").addEventListener("submit", (e) => {
  e.preventDefault();
  show(() => {
    nodes.clear(); links.clear(); selected = null;
    add(JSON.parse(ex.search($("keyword").value, 25, 25)));
  });
});

$("expand").addEventListener("click", () => show(() => {
  const view = ex.expand(selected, [...nodes.keys()], [...links.keys()]);
  add(JSON.parse(view));
}));

$("introduce").addEventListener("click", () => show(() => {
  $("report").textContent = JSON.parse(ex.introduce(selected)).markdown;
}));

canvas.addEventListener("click", (e) => {
  const r = canvas.getBoundingClientRect();
  const x = e.clientX - r.left, y = e.clientY - r.top;
  for (const n of nodes.values()) {
    if (Math.hypot(n.x - x, n.y - y) < 10) return show(() => select(n.id));
  }
});

await init();
ex = new Explorer();
const s = JSON.parse(ex.stats());
$("stats").textContent = `${s.nodes} nodes, ${s.relationships} relationships`;
resize();
window.addEventListener("resize", resize);
$("search").requestSubmit();
loop();
