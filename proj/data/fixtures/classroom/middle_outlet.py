def execute_command(image):
    outlet_patches = ImagePatch(image).find('outlet')
    if len(outlet_patches) == 0:
        return {'function': 'None', 'error': 'No outlet found.'}
    outlet_patches.sort(key=lambda x: x.horizontal_center)
    outlet = outlet_patches[len(outlet_patches) // 2]
    return {'function': 'navigate_to_object', 'inputs': (outlet.horizontal_center, outlet.vertical_center), 'box': [outlet.left, outlet.lower, outlet.right, outlet.upper]}
