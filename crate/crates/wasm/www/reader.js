// Recipient side. On the landing page (`/read#access=...`) the access code is
// kept in this browser. On the reading page the key is fetched with it and the
// envelopes are decrypted in a worker.

const STORE = "mailseal-access";

function savedCodes() {
  try {
    return JSON.parse(localStorage.getItem(STORE)) ?? [];
  } catch {
    return [];
  }
}

function saveCode(code) {
  const codes = savedCodes().filter((c) => c !== code);
  codes.unshift(code);
  localStorage.setItem(STORE, JSON.stringify(codes.slice(0, 20)));
}

function show(...nodes) {
  document.getElementById("reader").replaceChildren(...nodes);
}

function el(tag, text, className) {
  const node = document.createElement(tag);
  if (text !== undefined) node.textContent = text;
  if (className) node.className = className;
  return node;
}

async function fetchKey(keyService, messageId, codes) {
  for (const code of codes) {
    const res = await fetch(`${keyService}/keys/${encodeURIComponent(messageId)}`, {
      headers: { authorization: `Bearer ${code}` },
    });
    if (res.ok) return res.json();
  }
  return null;
}

function decryptInWorker(kernelUrl, payload, key) {
  const worker = new Worker(new URL("./decrypt-worker.js", import.meta.url), { type: "module" });
  return new Promise((resolve) => {
    worker.onmessage = (event) => {
      resolve(event.data);
      worker.terminate();
    };
    worker.postMessage({ kernelUrl: new URL(kernelUrl, location.href).href, payload, key });
  });
}

function renderMessage(result) {
  const nodes = [el("h1", result.subject || "(no subject)"), el("pre", result.body, "body")];
  if (result.attachments.length) {
    const list = el("ul", undefined, "attachments");
    for (const a of result.attachments) {
      const link = el("a", `${a.name} (${a.data.byteLength} bytes)`);
      link.href = URL.createObjectURL(new Blob([a.data]));
      link.download = a.name;
      const item = el("li");
      item.append(link);
      list.append(item);
    }
    nodes.push(list);
  }
  show(...nodes);
}

function askForCode(retry) {
  const form = el("form");
  const input = el("input");
  input.placeholder = "access code";
  form.append(el("p", "You are not a recipient of this message, or your access code is missing."), input, el("button", "Try code"));
  form.onsubmit = (event) => {
    event.preventDefault();
    if (input.value.trim()) {
      saveCode(input.value.trim());
      retry();
    }
  };
  show(form);
}

async function read() {
  const payloadNode = document.getElementById("mailseal-payload");
  const code = new URLSearchParams(location.hash.slice(1)).get("access");
  if (code) {
    saveCode(code);
    history.replaceState(null, "", location.pathname);
  }
  if (!payloadNode) return;

  const payload = payloadNode.textContent;
  const messageId = JSON.parse(payload).message_id;
  const keyService = document.body.dataset.keyService.replace(/\/$/, "");
  const key = await fetchKey(keyService, messageId, savedCodes());
  if (!key) {
    askForCode(read);
    return;
  }
  show(el("p", "Decrypting…"));
  const result = await decryptInWorker(document.body.dataset.kernel, payload, key);
  if (result.error) {
    show(el("p", result.tamper
      ? "This message was altered after it was sent. Nothing from it is shown."
      : `The message could not be opened: ${result.error}`, "alert"));
    return;
  }
  renderMessage(result);
}

read();
