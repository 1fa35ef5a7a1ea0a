import init, { generateKey, MessageBuilder, tamperLab } from "./pkg/mailseal_wasm.js";

const MAX_ATTACHMENT = 20 * 1024 * 1024;

const form = document.getElementById("compose-form");
const log = document.getElementById("compose-log");
const send = form.querySelector("button");

function recipients() {
  return form.recipients.value.split(",").map((r) => r.trim()).filter(Boolean);
}

function step(text, failed = false) {
  const li = document.createElement("li");
  li.textContent = text;
  if (failed) li.className = "failed";
  log.append(li);
}

function refresh() {
  send.disabled = recipients().length === 0 || form.body.value.trim() === "";
}

async function postJson(url, body) {
  const res = await fetch(url, {
    method: "POST",
    headers: { "content-type": "application/json" },
    body: JSON.stringify(body),
  });
  const text = await res.text();
  if (!res.ok) throw new Error(`${url}: ${res.status} ${text}`);
  return text ? JSON.parse(text) : null;
}

async function sendMessage(event) {
  event.preventDefault();
  log.replaceChildren();
  const files = [...form.files.files];
  const big = files.find((f) => f.size > MAX_ATTACHMENT);
  if (big) {
    step(`${big.name} is larger than 20 MiB; nothing was sent`, true);
    return;
  }
  const sender = form.sender.value.trim();
  const to = recipients();
  const messageId = crypto.randomUUID();

  const key = generateKey();
  const builder = new MessageBuilder(form.subject.value, form.body.value);
  for (const file of files) {
    builder.addAttachment(file.name, new Uint8Array(await file.arrayBuffer()));
  }
  const bundle = JSON.parse(builder.encrypt(key, messageId, sender));
  builder.free();
  step(`encrypted ${1 + files.length} part(s)`);

  try {
    const registration = await postJson(`${form.keys.value.replace(/\/$/, "")}/keys`, {
      message_id: messageId,
      key_id: key.keyId,
      key_b64: key.toB64(),
      sender_id: sender,
      recipients: to,
    });
    key.free();
    step("key registered");
    const byAddress = new Map(registration.credentials.map((c) => [c.recipient_id, c.token]));
    await postJson("/messages", {
      ...bundle,
      sender_id: sender,
      recipients: to.map((address) => ({ address, credential: byAddress.get(address) })),
    });
    step("ciphertext stored");
    const outcome = await postJson(`/messages/${encodeURIComponent(messageId)}/notify`, {});
    step(`${outcome.dispatched} notification(s) sent`);
    for (const f of outcome.failures) step(`could not notify ${f.recipient}: ${f.reason}`, true);
  } catch (err) {
    step(`${err.message}; press send again to retry`, true);
  }
}

const tamperForm = document.getElementById("tamper-form");
const tamperOut = document.getElementById("tamper-out");

function runTamper(event) {
  event.preventDefault();
  try {
    const report = JSON.parse(tamperLab(tamperForm.text.value, tamperForm.kind.value, Number(tamperForm.position.value)));
    tamperOut.className = report.rejected ? "out rejected" : "out accepted";
    tamperOut.textContent = report.rejected
      ? `rejected: ${report.error}\nno plaintext released`
      : `opened: ${report.recovered}`;
  } catch (err) {
    tamperOut.className = "out";
    tamperOut.textContent = String(err.message ?? err);
  }
}

await init();
form.addEventListener("input", refresh);
form.addEventListener("submit", sendMessage);
tamperForm.addEventListener("submit", runTamper);
refresh();
