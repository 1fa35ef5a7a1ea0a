use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use anyhow::Context;
use clap::Parser;
use mailseal_mailservice::{
    http, DirMessageStore, MemoryMessageStore, MessageService, MessageStore, OutboxTransport, ServiceConfig,
};

/// Untrusted message service: stores envelopes and notifies recipients.
#[derive(Parser)]
#[command(version)]
struct Args {
    #[arg(long, env = "MAILSEAL_MESSAGES_LISTEN", default_value = "127.0.0.1:8080")]
    listen: SocketAddr,
    /// Directory receiving notification mails as .eml files.
    #[arg(long, env = "MAILSEAL_OUTBOX", default_value = "outbox")]
    outbox: PathBuf,
    /// Directory for message records. In memory when omitted.
    #[arg(long, env = "MAILSEAL_MESSAGES_STORAGE")]
    storage: Option<PathBuf>,
    /// Key service base URL handed to the reading page.
    #[arg(long, env = "MAILSEAL_KEY_SERVICE_URL", default_value = "http://127.0.0.1:8081")]
    key_service_url: String,
    /// Public base URL of this service, used in attachments and links.
    #[arg(long, env = "MAILSEAL_PUBLIC_URL")]
    public_url: Option<String>,
    /// Directory with the browser client and kernel module.
    #[arg(long, env = "MAILSEAL_STATIC_DIR")]
    static_dir: Option<PathBuf>,
}

#[tokio::main]
async fn main() -> anyhow::Result<()> {
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::from_default_env().add_directive("info".parse()?))
        .init();
    let args = Args::parse();

    let store: Arc<dyn MessageStore> = match &args.storage {
        Some(dir) => Arc::new(DirMessageStore::open(dir).with_context(|| format!("opening {}", dir.display()))?),
        None => Arc::new(MemoryMessageStore::new()),
    };
    let transport = Arc::new(OutboxTransport::new(&args.outbox).context("creating outbox")?);
    let config = ServiceConfig {
        public_url: args.public_url.unwrap_or_else(|| format!("http://{}", args.listen)),
        key_service_url: args.key_service_url,
        ..ServiceConfig::default()
    };
    let app = http::router(MessageService::new(store, transport, config), args.static_dir);
    let listener = tokio::net::TcpListener::bind(args.listen).await?;
    tracing::info!(addr = %listener.local_addr()?, "message service listening");
    axum::serve(listener, app).await?;
    Ok(())
}
