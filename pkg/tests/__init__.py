# Тесты для проекта pyreeb
