"""
Laminar detection service - main application module.

Mounts the routers on the shared application instance.
"""

from core.app import app

from api.routes.certificates import router as certificates_router
from api.routes.detect import router as detect_router
from api.routes.health import router as health_router
from api.routes.triangulations import router as triangulations_router

app.include_router(health_router)
app.include_router(triangulations_router)
app.include_router(detect_router)
app.include_router(certificates_router)


if __name__ == "__main__":
    import uvicorn
    from core.config import settings

    uvicorn.run(
        "main:app",
        host=settings.api_host,
        port=settings.api_port,
        reload=settings.api_reload,
    )
