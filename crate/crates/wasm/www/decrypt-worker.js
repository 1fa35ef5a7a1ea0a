// Decrypts the reading page payload off the main thread.

self.onmessage = async (event) => {
  const { kernelUrl, payload, key } = event.data;
  const kernel = await import(kernelUrl);
  await kernel.default();
  let opened;
  try {
    const k = kernel.Key.fromB64(key.key_id, key.key_b64);
    opened = kernel.decryptPosted(payload, k);
    k.free();
  } catch (err) {
    const message = String(err.message ?? err);
    self.postMessage({ error: message, tamper: kernel.isTamperError(message) });
    return;
  }
  const attachments = [];
  for (let i = 0; i < opened.attachmentCount; i++) {
    attachments.push({ name: opened.attachmentName(i), data: opened.attachmentData(i).buffer });
  }
  const result = { subject: opened.subject, body: opened.body, attachments };
  opened.free();
  self.postMessage(result, attachments.map((a) => a.data));
};
