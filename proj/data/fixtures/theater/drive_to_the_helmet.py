def execute_command(image):
    image_patch = ImagePatch(image)
    helmet_patches = image_patch.find('helmet')
    if len(helmet_patches) == 0:
        return {'function': 'None', 'error': 'No helmet found.'}
    helmet = helmet_patches[0]
    return {'function': 'navigate_to_object', 'inputs': (helmet.horizontal_center, helmet.vertical_center), 'box': [helmet.left, helmet.lower, helmet.right, helmet.upper]}
